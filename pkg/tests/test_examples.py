"""Small worked examples, one or two lines each."""

import io
import json
from fractions import Fraction

import pytest

from conftest import MANIFESTS
from gcx.cli import run
from gcx.cohomology import ddbar_lemma, degree_subspace, derham, gh_k
from gcx.grading import d_matrix
from gcx.errors import InvalidStructureError
from gcx.exterior import Form, GVector, clifford, contract_index, exp_bivec, mukai, pairing
from gcx.gcs import b_transform, from_complex, from_spinor, gtype, nondegeneracy_check
from gcx.grading import build_grading, project
from gcx.scalars import I, Scalar, circle_point
from gcx.structlang import parse_bivector, parse_endo, parse_form, parse_salamon
from gcx.subspace import Matrix, Subspace, image, kernel, quotient
import reference_data as P

E = lambda text, dim=6: parse_form(text, dim)  # noqa: E731


def test_scalar_examples():
    assert Scalar(1, 1) * Scalar(1, -1) == 2
    z = Scalar(Fraction(3, 7), Fraction(2, 5))
    assert z.conj().conj() == z
    assert I.inv() == -I


@pytest.mark.parametrize("s, point", [("0", (1, 0)), ("inf", (-1, 0)), ("infinity", (-1, 0)), ("1", (0, 1))])
def test_circle_examples(s, point):
    p = circle_point(s)
    assert (p.c, p.s) == point


def test_wedge_examples():
    q = E("e36 + e45")
    assert q ^ q == E("2*e3456")


def test_contraction_examples():
    assert contract_index(0, E("e12")) == E("e2")
    assert contract_index(2, E("e12")).is_zero()
    assert contract_index(0, contract_index(1, E("e12"))) == E("-1")
    assert exp_bivec(parse_bivector("e_35", 6), E("e1 + e3")) == E("e1 + e3")


def test_lie_derivative_examples(iwasawa):
    e = lambda i: [1 if j == i else 0 for j in range(6)]  # noqa: E731
    assert iwasawa.lie_derivative(e(4), E("e5")).is_zero()
    assert iwasawa.lie_derivative(e(0), E("e5")) == E("e3")
    assert iwasawa.lie_derivative(e(2), E("1")).is_zero()


def test_d_examples(iwasawa):
    assert iwasawa.d(E("e16 + e25")).is_zero()
    for i in range(1, 7):
        for j in range(i + 1, 7):
            assert iwasawa.d(iwasawa.d(Form.monomial(i, j))).is_zero()


def test_clifford_and_pairing_examples():
    v = lambda vec, cov: GVector.make(vec + [0] * (2 - len(vec)), cov + [0] * (2 - len(cov)))  # noqa: E731
    assert clifford(v([1], []), E("e12", 2)) == E("e2", 2)
    assert clifford(v([], [1]), E("1", 2)) == E("e1", 2)
    assert clifford(v([1], [0, 1]), E("e1", 2)) == E("1 - e12", 2)
    assert pairing(v([1], [1]), v([1], [1])) == 1
    assert pairing(v([1], []), v([0, 1], [])) == 0
    assert pairing(v([1], []), v([], [1])) == Fraction(1, 2)


def test_mukai_examples():
    assert mukai(E("1"), E("e123456"), 6) == 1
    assert mukai(E("e12"), E("e3456"), 6) == -1


def test_linear_algebra_examples(iwasawa, dr_iwasawa, g_rho):
    dm = d_matrix(iwasawa)
    deg1, deg2 = degree_subspace(6, 1), degree_subspace(6, 2)
    assert Subspace.span(64, (dm.apply(v) for v in deg1.basis)).dim == 2
    assert kernel(dm).intersect(deg2).dim == 10
    assert kernel(Matrix.zero(64, 64)).dim == 64
    assert Subspace.span(64, [E("e1").terms]).intersect(Subspace.span(64, [E("e2").terms])).dim == 0
    assert image(dm).member(E("e13 - e24").terms)
    assert dr_iwasawa.total.dim == 36
    z = kernel(dm)
    assert quotient(z, z).dim == 0
    assert gh_k(build_grading(g_rho), dr_iwasawa, 3).dim == 1


def test_two_dimensional_spinors():
    plane = parse_salamon("0,0")
    with pytest.raises(InvalidStructureError):
        from_spinor(E("e1", 2), plane)
    g = from_spinor(E("exp(i*e12)", 2), plane)
    assert gtype(g) == 0


def test_nondegeneracy_examples():
    assert nondegeneracy_check(E("e1 + i*e2"), E("e12"), 6).is_zero()
    assert not nondegeneracy_check(E("e3 + i*e4"), E("e15 + e26"), 6).is_zero()
    for s in P.CIRCLE_SAMPLES:
        pt = circle_point(s)
        om = parse_form(P.OMEGA_T, 6, {"cos": pt.c, "sin": pt.s})
        assert nondegeneracy_check(E("e1 + i*e2"), om, 6) == -4 * I


def test_b_transform_group_law(g_j0):
    b = E("e13 - e24")
    assert b_transform(g_j0, E("0")).endo == g_j0.endo
    back = b_transform(b_transform(g_j0, b), -b)
    assert back.endo == g_j0.endo and back.canonical_generator() == g_j0.canonical_generator()


def test_projection_examples(g_j0, g_omega):
    parts = project(E("e1"), build_grading(g_j0))
    assert parts == {1: E("1/2*e1 + 1/2*i*e2"), -1: E("1/2*e1 - 1/2*i*e2")}
    parts = project(E("1"), build_grading(g_omega))
    assert set(parts) == {3, 1, -1, -3}
    assert parts[3] == E("exp(i*(e16 + e25 + e34))") * Fraction(1, 8)
    assert sum(parts.values(), Form()) == E("1")


def test_pieces_out_of_range(g_rho, dr_iwasawa):
    assert gh_k(build_grading(g_rho), dr_iwasawa, 4).dim == 0


def test_abelian_betti(torus6):
    assert derham(torus6).betti == (1, 6, 15, 20, 15, 6, 1)


def test_kahler_torus_ddbar(torus6):
    g = from_complex(parse_endo({"images": P.J0_IMAGES}, torus6), torus6)
    assert ddbar_lemma(build_grading(g))


def test_not_full_witness():
    m = json.loads(_run("decompose", "-i", str(MANIFESTS / "iwasawa.json"), "-s", "Jt", "--circle", "s=1"))
    assert m["result"]["full"] is False
    assert m["result"]["witness_not_full"] == "e3"


def _run(*argv):
    out = io.StringIO()
    run(list(argv) + ["--format", "json"], out, io.StringIO())
    return out.getvalue()


def test_zero_b_gives_identical_report():
    iw = str(MANIFESTS / "iwasawa.json")
    plain = json.loads(_run("decompose", "-i", iw, "-s", "J0"))["result"]
    moved = json.loads(_run("transform", "-i", iw, "-s", "J0", "--B", "0"))["result"]
    assert all(moved[k] == v for k, v in plain.items() if k not in ("structure", "kind"))


def test_byte_identical_json():
    args = ("decompose", "-i", str(MANIFESTS / "iwasawa.json"), "-s", "rho", "--reps")
    assert _run(*args) == _run(*args)


def test_sweep_h10():
    rows = json.loads(_run("sweep", "-i", str(MANIFESTS / "iwasawa.json"), "-s", "Jt", "--circle-list", "0,1/2,1,2,inf"))
    assert [r["h10"] for r in rows["result"]["rows"]] == [2, 1, 1, 1, 2]
