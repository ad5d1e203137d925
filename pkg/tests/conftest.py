import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from gcx.cohomology import derham  # noqa: E402
from gcx.exterior import Form  # noqa: E402
from gcx.gcs import from_complex, from_spinor, from_symplectic  # noqa: E402
from gcx.scalars import Scalar  # noqa: E402
from gcx.structlang import parse_endo, parse_form, parse_salamon  # noqa: E402

import reference_data as P  # noqa: E402

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

ROOT = Path(__file__).resolve().parents[1]
MANIFESTS = ROOT / "manifests"

small = st.fractions(min_value=-3, max_value=3, max_denominator=4)
scalars = st.builds(Scalar, small, small)


def forms(dim: int = 6, max_terms: int = 6):
    return st.dictionaries(st.integers(0, (1 << dim) - 1), scalars, max_size=max_terms).map(Form)


def homogeneous(dim: int, k: int):
    from gcx.exterior import masks_of_degree

    masks = masks_of_degree(dim, k)
    return st.dictionaries(st.sampled_from(masks), scalars, max_size=5).map(Form)


@pytest.fixture(scope="session")
def iwasawa():
    return parse_salamon(P.IWASAWA)


@pytest.fixture(scope="session")
def torus6():
    return parse_salamon("0,0,0,0,0,0")


@pytest.fixture(scope="session")
def kt():
    return parse_salamon("0,0,0,12,0,0")


@pytest.fixture(scope="session")
def dr_iwasawa(iwasawa):
    return derham(iwasawa)


@pytest.fixture(scope="session")
def j0(iwasawa):
    return parse_endo({"images": P.J0_IMAGES}, iwasawa)


@pytest.fixture(scope="session")
def j1(iwasawa):
    return parse_endo({"images": P.J1_IMAGES}, iwasawa)


@pytest.fixture(scope="session")
def g_j0(iwasawa, j0):
    return from_complex(j0, iwasawa, "J0")


@pytest.fixture(scope="session")
def g_j1(iwasawa, j1):
    return from_complex(j1, iwasawa, "J1")


@pytest.fixture(scope="session")
def g_rho(iwasawa):
    return from_spinor(parse_form(P.RHO, iwasawa), iwasawa, "rho")


@pytest.fixture(scope="session")
def g_omega(iwasawa):
    return from_symplectic(parse_form("e16 + e25 + e34", iwasawa), iwasawa, "omega")


@pytest.fixture(scope="session")
def corpus(iwasawa, torus6, kt, g_j0, g_j1, g_rho, g_omega):
    """Every structure the theorem checks run over, with its algebra."""
    out = {
        "iwasawa/J0": g_j0,
        "iwasawa/J1": g_j1,
        "iwasawa/rho": g_rho,
        "iwasawa/omega": g_omega,
        "torus/J": from_complex(parse_endo({"images": P.J0_IMAGES}, torus6), torus6),
        "torus/omega": from_symplectic(parse_form("e12 + e34 + e56", torus6), torus6),
        "torus/rho": from_spinor(parse_form("exp(i*(e34 + e56)) ^ (e1 + i*e2)", torus6), torus6),
        "kt/J": from_complex(parse_endo({"images": P.J0_IMAGES}, kt), kt),
        "kt/omega": from_symplectic(parse_form("e13 + e24 + e56", kt), kt),
    }
    return out


def frac(x) -> Fraction:
    return Fraction(x)


def word_form(coframe: list[str], word: str) -> Form:
    """``"13|2"`` -> ``phi^1 ^ phi^3 ^ conj(phi^2)`` for the given holomorphic coframe."""
    phis = [parse_form(c, 6) for c in coframe]
    hol, anti = word.split("|")
    out = Form.scalar(1)
    for ch in hol:
        out = out ^ phis[int(ch) - 1]
    for ch in anti:
        out = out ^ phis[int(ch) - 1].conj()
    return out


# two entries of the J0 table that do not represent what they claim; see README
J0_TABLE_FIXES = {(2, 0): {"12|": "13|"}, (2, 2): {"13|22": "13|23"}}


def j0_table():
    out = {}
    for key, words in P.J0_TABLE.items():
        fix = J0_TABLE_FIXES.get(key, {})
        out[key] = [fix.get(w, w) for w in words]
    return out


ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
