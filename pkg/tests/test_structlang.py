import pytest
from hypothesis import given

from conftest import forms
from gcx.errors import IndexRangeError, JacobiError, MalformedPairError, NotAlmostComplexError, ParseError, ValidationError
from gcx.exterior import Form, exp_form
from gcx.structlang import (
    parse_bivector,
    parse_endo,
    parse_form,
    parse_salamon,
    print_form,
    print_salamon,
)
from gcx.subspace import Matrix
import reference_data as P


def test_iwasawa_structure_equations():
    alg = parse_salamon(P.IWASAWA)
    assert alg.dim == 6
    assert alg.d_generator(5) == parse_form("e13 - e24", 6)
    assert alg.d_generator(6) == parse_form("e14 + e23", 6)
    assert print_salamon(alg) == "0,0,0,0,13-24,14+23"


def test_abelian():
    alg = parse_salamon("0,0")
    assert alg.is_abelian()


def test_index_out_of_range():
    with pytest.raises(IndexRangeError):
        parse_salamon("0,0,77")


def test_malformed_pair():
    with pytest.raises(MalformedPairError):
        parse_salamon("0,0,1")


def test_jacobi_failure():
    with pytest.raises(JacobiError):
        parse_salamon("0,0,0,0,12,35")


@pytest.mark.parametrize("text", ["0,0,0,0,13+42,14+23", "0,0,0,12,0,0", "0,0,0,0,0,0", "0,0,12,13,14,15"])
def test_salamon_round_trip(text):
    alg = parse_salamon(text)
    assert parse_salamon(print_salamon(alg)) == alg


def test_exp_expansion():
    rho = parse_form(P.RHO, 6)
    phi = parse_form("e1 + i*e2", 6)
    q = parse_form("-e36 - e45", 6)
    i = parse_form("i", 6).coeff(0)
    assert rho == phi + (q ^ phi) * i - (q ^ q ^ phi) * parse_form("1/2", 6).coeff(0)


def test_small_literals():
    assert parse_form("0", 6).is_zero()
    assert print_form(Form()) == "0"
    assert print_form(parse_form("e21", 6)) == "-e12"
    assert parse_form("conj(e1 + i*e2)", 6) == parse_form("e1 - i*e2", 6)


def test_exp_rejects_odd_argument():
    with pytest.raises(ParseError):
        parse_form("exp(e1)", 6)


def test_unknown_token():
    with pytest.raises(ParseError):
        parse_form("e1 + x", 6)


def test_index_overflow():
    with pytest.raises(IndexRangeError):
        parse_form("e17", 6)


@given(forms())
def test_print_parse_round_trip(f):
    assert parse_form(print_form(f, 6), 6) == f


@given(forms())
def test_exp_inverse(f):
    even = Form({m: c for m, c in f.terms.items() if bin(m).count("1") % 2 == 0 and m})
    if even.is_zero():
        return
    assert (exp_form(even) ^ exp_form(-even)) == parse_form("1", 6)


def test_endo_auto_completion():
    j0 = parse_endo({"images": P.J0_IMAGES}, 6)
    full = parse_endo({"images": {"e1": "-e2", "e2": "e1", "e3": "-e4", "e4": "e3", "e5": "-e6", "e6": "e5"}}, 6)
    assert j0 == full
    assert j0 @ j0 == Matrix.identity(6, -1)


def test_endo_j1_variants_are_different_matrices():
    a = parse_endo({"images": P.J1_IMAGES}, 6)
    b = parse_endo({"images": P.J1_IMAGES_ALT}, 6)
    assert a != b


def test_endo_not_almost_complex():
    identity = [[1 if i == j else 0 for j in range(6)] for i in range(6)]
    with pytest.raises(NotAlmostComplexError):
        parse_endo({"matrix": identity}, 6)


def test_complex_valued_endo_rejected():
    # K_t at t = 1/2: e3 -> -i e4 is not real
    with pytest.raises(NotAlmostComplexError):
        parse_endo({"images": {"e1": "-e2", "e3": "-i*e4", "e5": "-i*e6"}}, 6)


def test_endo_dimension_mismatch():
    with pytest.raises(ValidationError):
        parse_endo({"matrix": [[0, 1], [-1, 0]]}, 6)


def test_family_tokens():
    env = {"cos": parse_form("3/5", 6).coeff(0), "sin": parse_form("4/5", 6).coeff(0)}
    assert parse_form("cos*e1 + sin*e2", 6, env) == parse_form("3/5*e1 + 4/5*e2", 6)


def test_bivector():
    b = parse_bivector("e_35 - e_64", 6)
    assert b.terms == {(3, 5): 1, (4, 6): 1}
