import pytest

from conftest import MANIFESTS, j0_table, word_form
from gcx.cohomology import (
    bc_injective,
    complex_verdicts,
    ddbar_lemma,
    derham,
    gh_bc,
    gh_subgroups,
    hpq,
    hpq_table,
    mukai_gram,
    real_j_split,
    symplectic_suite,
    verdict_gen,
)
from gcx.errors import NotIntegrableError
from gcx.grading import build_grading
from gcx.manifest import build, load_manifest
from gcx.scalars import circle_point
from gcx.structlang import parse_endo, parse_form
from gcx.subspace import rank
import reference_data as P


def test_betti(dr_iwasawa):
    assert dr_iwasawa.betti == (1, 4, 8, 10, 8, 4, 1)


def test_listed_representatives(dr_iwasawa):
    for k, texts in P.DERHAM_REPS.items():
        forms = [parse_form(t, 6) for t in texts]
        assert all(dr_iwasawa.closed(f) for f in forms)
        assert dr_iwasawa.is_basis(forms, k)


def test_is_basis_rejects_dependent(dr_iwasawa):
    assert not dr_iwasawa.is_basis([parse_form("e1", 6)] * 4, 1)
    assert not dr_iwasawa.is_basis([parse_form("e1", 6)], 1)


@pytest.mark.parametrize("images", [P.J0_IMAGES, P.J1_IMAGES])
def test_hpq_dims(dr_iwasawa, images):
    j = parse_endo({"images": images}, 6)
    table = hpq_table(j, dr_iwasawa)
    for key, dim in P.HPQ_DIMS.items():
        assert table[key] == dim, key


@pytest.mark.parametrize("which", ["J0", "J1"])
def test_hpq_representatives(dr_iwasawa, which):
    images, coframe, table = {
        "J0": (P.J0_IMAGES, P.J0_COFRAME, j0_table()),
        "J1": (P.J1_IMAGES, P.J1_COFRAME, P.J1_TABLE),
    }[which]
    j = parse_endo({"images": images}, 6)
    for (p, q), words in table.items():
        forms = [word_form(coframe, w) for w in words]
        assert all(dr_iwasawa.closed(f) for f in forms), (p, q)
        h = dr_iwasawa.degrees[p + q]
        assert h.classes_span(f.terms for f in forms) == hpq(j, dr_iwasawa, p, q), (p, q)


@pytest.mark.parametrize("images", [P.J0_IMAGES, P.J1_IMAGES])
def test_complex_pure_and_full(dr_iwasawa, images):
    j = parse_endo({"images": images}, 6)
    assert all(v.pure_and_full for v in complex_verdicts(j, dr_iwasawa).values())


@pytest.mark.parametrize("name", ["g_j0", "g_j1"])
def test_no_ddbar_lemma(name, request, dr_iwasawa):
    gr = build_grading(request.getfixturevalue(name))
    assert not ddbar_lemma(gr, dr_iwasawa)
    assert not bc_injective(gr, dr_iwasawa)


def test_real_split(dr_iwasawa):
    s = real_j_split(parse_endo({"images": P.J0_IMAGES}, 6), dr_iwasawa)
    assert s.direct and s.spans


def test_rho_generalized_cohomology(g_rho, dr_iwasawa):
    gr = build_grading(g_rho)
    subs = gh_subgroups(gr, dr_iwasawa)
    assert {k: s.dim for k, s in subs.items()} == {3: 1, 2: 4, 1: 8, 0: 10, -1: 8, -2: 4, -3: 1}
    for k, texts in P.RHO_GH.items():
        forms = [parse_form(t, 6) for t in texts]
        for f in forms:
            assert dr_iwasawa.closed(f) and gr.piece(k).member(f.terms)
        assert dr_iwasawa.classes(forms) == subs[k]
    v = verdict_gen(gr, dr_iwasawa)
    assert v.pure_and_full and v.extra["bc_surjective"]


def test_bott_chern_images_equal_gh(g_j0, dr_iwasawa):
    gr = build_grading(g_j0)
    bc = gh_bc(gr, dr_iwasawa)
    assert bc.images == gh_subgroups(gr, dr_iwasawa)


def test_bc_needs_integrability(dr_iwasawa):
    m = load_manifest(MANIFESTS / "iwasawa.json")
    g = build(m, m.spec("Jt"), circle_point("1")).gen
    with pytest.raises(NotIntegrableError):
        gh_bc(build_grading(g), dr_iwasawa)


def test_iwasawa_symplectic(iwasawa, dr_iwasawa):
    rep = symplectic_suite(parse_form("e16 + e25 + e34", 6), iwasawa, dr_iwasawa)
    assert rep.hlc == {0: True, 1: False, 2: False, 3: True}
    assert [h for h, ok in rep.brylinski_surjective.items() if not ok] == [3, 4, 5]
    assert not rep.dd_lambda_lemma and not rep.dd_lambda_two_sided
    assert rep.equivalence_consistent and rep.sl2


def test_torus_symplectic(torus6):
    rep = symplectic_suite(parse_form("e12 + e34 + e56", 6), torus6)
    assert rep.hlc_all and rep.brylinski_all and rep.dd_lambda_lemma and rep.brylinski_pure_and_full
    assert rep.equivalence_consistent


def test_kodaira_thurston(kt):
    dr = derham(kt)
    assert dr.betti == (1, 5, 11, 14, 11, 5, 1)
    rep = symplectic_suite(parse_form("e13 + e24 + e56", 6), kt, dr)
    assert not rep.hlc_all and rep.equivalence_consistent


def test_mukai_nondegenerate(dr_iwasawa):
    g = mukai_gram(dr_iwasawa)
    assert rank(g) == 36
