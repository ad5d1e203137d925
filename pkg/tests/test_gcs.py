from fractions import Fraction

import pytest
from hypothesis import given

from conftest import homogeneous
from gcx.errors import InvalidStructureError, ValidationError
from gcx.exterior import GVector, clifford, pairing
from gcx.gcs import (
    annihilator,
    b_transform,
    from_complex,
    from_matrix,
    from_spinor,
    from_symplectic,
    gtype,
    integrable,
    nondegeneracy_check,
    pairing_matrix,
    spinor_type,
)
from gcx.structlang import parse_endo, parse_form
from gcx.subspace import Matrix


def test_types(g_j0, g_j1, g_rho, g_omega):
    assert [gtype(g) for g in (g_j0, g_j1, g_rho, g_omega)] == [3, 3, 1, 0]
    assert spinor_type(g_rho.canonical_generator()) == 1


@pytest.mark.parametrize("name", ["g_j0", "g_j1", "g_rho", "g_omega"])
def test_structure_axioms(name, request):
    g = request.getfixturevalue(name)
    g.check()
    dim = g.dim
    assert g.endo @ g.endo == Matrix.identity(2 * dim, -1)
    q = pairing_matrix(dim)
    assert g.endo.transpose() @ q @ g.endo == q
    assert g.plus_eigenspace().dim == dim
    assert annihilator(g.canonical_generator(), dim) == g.plus_eigenspace()


def test_complex_structure_spinor(g_j0):
    rho = g_j0.canonical_generator()
    expected = parse_form("(e1 + i*e2) ^ (e3 + i*e4) ^ (e5 + i*e6)", 6)
    assert {m for m in rho.terms} == {m for m in expected.terms}
    ratio = rho.coeff(next(iter(expected.terms))) * expected.coeff(next(iter(expected.terms))).inv()
    assert rho == expected * ratio


def test_symplectic_spinor(g_omega):
    rho = g_omega.canonical_generator()
    expected = parse_form("exp(i*(e16 + e25 + e34))", 6)
    assert rho == expected


def test_integrability(g_j0, g_j1, g_rho, g_omega, iwasawa):
    for g in (g_j0, g_j1, g_rho, g_omega):
        assert integrable(g)
    # J1 with e5 -> e6 swapped sign on the second pair is not integrable on this algebra
    bad = from_complex(parse_endo({"images": {"e1": "-e2", "e3": "-e5", "e4": "-e6"}}, iwasawa), iwasawa)
    res = integrable(bad)
    assert not res and res.witness is not None


def test_b_transform_of_symplectic(iwasawa, g_omega):
    b = parse_form("e12", 6)
    g = b_transform(g_omega, b)
    expected = parse_form("exp(e12 + i*(e16 + e25 + e34))", 6)
    assert g.canonical_generator() == expected
    assert annihilator(expected, 6) == g.plus_eigenspace()


def test_b_field_must_be_closed(g_omega):
    with pytest.raises(ValidationError):
        b_transform(g_omega, parse_form("e15", 6))


def test_annihilator_is_isotropic(g_rho):
    rho = g_rho.canonical_generator()
    for v in g_rho.plus_eigenspace().basis:
        gv = GVector.from_coords([v.get(i, 0) for i in range(12)])
        assert pairing(gv, gv).is_zero()
        assert clifford(gv, rho).is_zero()


@pytest.mark.parametrize("text", ["e1 + e2", "e12 + e34", "1 + e123"])
def test_invalid_spinors(iwasawa, text):
    with pytest.raises(InvalidStructureError):
        from_spinor(parse_form(text, 6), iwasawa)


def test_degenerate_symplectic(iwasawa):
    with pytest.raises(ValidationError):
        from_symplectic(parse_form("e12 + e34", 6), iwasawa)
    with pytest.raises(ValidationError):
        from_symplectic(parse_form("e12 + e34 + e56", 6), iwasawa)  # not closed


def test_matrix_must_square_to_minus_one(iwasawa):
    with pytest.raises(ValidationError):
        from_matrix(Matrix.identity(12), iwasawa)


def test_b_transform_commutes_with_endo(g_j0):
    b = parse_form("e13 - e24", 6)
    g = b_transform(g_j0, b, check_closed=False)
    assert annihilator(g.canonical_generator(), 6) == g.plus_eigenspace()


@given(homogeneous(6, 2))
def test_b_transform_covariance(torus6, b):
    """exp(B) maps the annihilator of rho onto that of exp(B) rho."""
    b = (b + b.conj()) * Fraction(1, 2)
    g = from_symplectic(parse_form("e12 + e34 + e56", 6), torus6)
    gb = b_transform(g, b)
    gb.check()
    assert annihilator(gb.canonical_generator(), 6) == gb.plus_eigenspace()
    assert gtype(gb) == 0


def test_nondegeneracy():
    om = parse_form("-e36 - e45", 6)
    assert not nondegeneracy_check(parse_form("e1 + i*e2", 6), om, 6).is_zero()
    assert nondegeneracy_check(parse_form("e3 + i*e4", 6), om, 6).is_zero()
