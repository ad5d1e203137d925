"""Generalized almost-complex structures on ``V + V*`` for a Lie algebra ``V``.

Coordinates on ``V + V*`` put the ``2n`` vector components first and the
``2n`` covector components after them.  A complex structure is supplied by its
action on covectors (``J e^1 = -e^2`` style); the vector action is the
transpose.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .errors import InvalidStructureError, ValidationError
from .exterior import (
    Bivector,
    Form,
    GVector,
    LieAlgebra,
    ONE_FORM,
    basis_form,
    clifford,
    contract_vec,
    covector,
    exp_bivec,
    exp_form,
    form_as_covector,
    popcount,
    top_coefficient,
    wedge,
    wedge_all,
)
from .scalars import I, ONE, ZERO, Scalar
from .structlang import check_almost_complex
from .subspace import Matrix, Subspace, Vec, kernel, vec_from_dense, vec_to_dense


def _block(a: Matrix, b: Matrix, c: Matrix, d: Matrix) -> Matrix:
    """``[[a, b], [c, d]]`` for square blocks of equal size."""
    n = a.nrows
    cols = []
    for j in range(n):
        col = dict(a.cols[j])
        col.update({i + n: x for i, x in c.cols[j].items()})
        cols.append(col)
    for j in range(n):
        col = dict(b.cols[j])
        col.update({i + n: x for i, x in d.cols[j].items()})
        cols.append(col)
    return Matrix(2 * n, 2 * n, cols)


def pairing_matrix(dim: int) -> Matrix:
    half = Matrix.identity(dim, Fraction(1, 2))
    z = Matrix.zero(dim, dim)
    return _block(z, half, half, z)


def gvector(coords: Vec, dim: int) -> GVector:
    return GVector.from_coords(vec_to_dense(coords, 2 * dim))


def gcoords(v: GVector) -> Vec:
    return vec_from_dense(v.coords())


def clifford_matrix(f: Form, dim: int) -> Matrix:
    """Columns: the Clifford action of each basis element of ``V + V*`` on ``f``.

    Rows index forms by bitmask, so the kernel is the annihilator of ``f``.
    """
    cols = []
    for i in range(dim):
        x = [ZERO] * dim
        x[i] = ONE
        cols.append(dict(contract_vec(x, f).terms))
    for i in range(dim):
        cols.append(dict(wedge(Form.monomial(i + 1), f).terms))
    return Matrix(1 << dim, 2 * dim, cols)


def annihilator(f: Form, dim: int) -> Subspace:
    return kernel(clifford_matrix(f, dim))


@dataclass(frozen=True, eq=False)
class GenStructure:
    """Generalized almost-complex structure: real endomorphism of ``V + V*`` plus
    (optionally) a generator of its canonical spinor line."""

    endo: Matrix
    algebra: LieAlgebra
    spinor: Form | None = None
    label: str = ""
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def n(self) -> int:
        return self.algebra.dim // 2

    def plus_eigenspace(self) -> Subspace:
        """``L``: the ``+i`` eigenspace of the complexified endomorphism."""
        if "L" not in self._cache:
            self._cache["L"] = kernel(self.endo - Matrix.identity(2 * self.dim, I))
        return self._cache["L"]

    def minus_eigenspace(self) -> Subspace:
        return self.plus_eigenspace().conj()

    def canonical_generator(self) -> Form:
        """Spinor if stored, otherwise the (1-dimensional) joint annihilator of ``L``,
        normalised so the first nonzero coefficient in bitmask order is 1."""
        if self.spinor is not None:
            return self.spinor
        if "U" not in self._cache:
            self._cache["U"] = _joint_annihilator(self.plus_eigenspace(), self.dim)
        return self._cache["U"]

    def apply(self, v: GVector) -> GVector:
        return gvector(self.endo.apply(gcoords(v)), self.dim)

    def check(self) -> None:
        validate_endo(self.endo, self.dim)
        if self.spinor is not None:
            ann = annihilator(self.spinor, self.dim)
            if ann != self.plus_eigenspace():
                raise InvalidStructureError("spinor annihilator differs from the +i eigenspace")


def _joint_annihilator(lsp: Subspace, dim: int) -> Form:
    """Forms killed by every element of ``L`` under Clifford multiplication."""
    ambient = 1 << dim
    basis_images = [
        [_clifford_basis(gvector(v, dim), m) for m in range(ambient)] for v in lsp.basis
    ]
    # stack the maps: row block b holds v_b . (basis form)
    cols = []
    for m in range(ambient):
        col: Vec = {}
        for b, imgs in enumerate(basis_images):
            for k, x in imgs[m].terms.items():
                col[b * ambient + k] = x
        cols.append(col)
    ker = kernel(Matrix(ambient * len(basis_images), ambient, cols))
    if ker.dim != 1:
        raise InvalidStructureError(f"joint annihilator of L has dimension {ker.dim}, expected 1")
    return Form(ker.basis[0])


def _clifford_basis(v: GVector, mask: int) -> Form:
    return clifford(v, basis_form(mask))


def validate_endo(endo: Matrix, dim: int) -> None:
    size = 2 * dim
    if (endo.nrows, endo.ncols) != (size, size):
        raise ValidationError(f"endomorphism must be {size}x{size}")
    if not endo.is_real():
        raise InvalidStructureError("generalized structure must be real")
    if endo @ endo != Matrix.identity(size, -1):
        raise InvalidStructureError("J^2 != -1")
    g = pairing_matrix(dim)
    if endo.transpose() @ g @ endo != g:
        raise InvalidStructureError("J is not orthogonal for the natural pairing")


def from_matrix(endo: Matrix, algebra: LieAlgebra, label: str = "") -> GenStructure:
    validate_endo(endo, algebra.dim)
    return GenStructure(endo, algebra, None, label)


def from_complex(j_cov: Matrix, algebra: LieAlgebra, label: str = "") -> GenStructure:
    """``[[-J, 0], [0, J*]]``; the spinor is the wedge of a basis of (1,0)-forms."""
    dim = algebra.dim
    if dim % 2:
        raise ValidationError("odd dimension")
    check_almost_complex(j_cov)
    j_vec = j_cov.transpose()
    z = Matrix.zero(dim, dim)
    endo = _block(-j_vec, z, z, j_cov)
    spinor = wedge_all(covector(vec_to_dense(v, dim)) for v in holomorphic_coframe(j_cov))
    return GenStructure(endo, algebra, spinor, label)


def holomorphic_coframe(j_cov: Matrix) -> tuple[Vec, ...]:
    """Canonical basis of the ``+i`` eigenspace of ``J`` on complex covectors."""
    return kernel(j_cov - Matrix.identity(j_cov.nrows, I)).basis


def symplectic_matrix(omega: Form, dim: int) -> Matrix:
    """Matrix of ``X -> iota_X omega`` (vector coordinates to covector coordinates)."""
    cols = []
    for i in range(dim):
        x = [ZERO] * dim
        x[i] = ONE
        cols.append(vec_from_dense(form_as_covector(contract_vec(x, omega), dim)))
    return Matrix(dim, dim, cols)


def check_symplectic(omega: Form, algebra: LieAlgebra, require_real: bool = True) -> None:
    if omega.degrees() - {2} or omega.is_zero():
        raise InvalidStructureError("symplectic form must be a nonzero 2-form")
    if require_real and not omega.is_real():
        raise InvalidStructureError("symplectic form must be real")
    if not algebra.d(omega).is_zero():
        raise InvalidStructureError("symplectic form is not closed")
    n = algebra.dim // 2
    power = ONE_FORM
    for _ in range(n):
        power = wedge(power, omega)
    if top_coefficient(power, algebra.dim).is_zero():
        raise InvalidStructureError(f"omega^{n} = 0: degenerate 2-form")


def from_symplectic(omega: Form, algebra: LieAlgebra, label: str = "") -> GenStructure:
    """``[[0, -omega^{-1}], [omega, 0]]`` with spinor ``exp(i omega)``."""
    check_symplectic(omega, algebra)
    dim = algebra.dim
    w = symplectic_matrix(omega, dim)
    z = Matrix.zero(dim, dim)
    endo = _block(z, -w.inverse(), w, z)
    return GenStructure(endo, algebra, exp_form(omega * I), label)


def from_spinor(rho: Form, algebra: LieAlgebra, label: str = "") -> GenStructure:
    """Reconstruct the endomorphism as ``+i`` on the annihilator ``L`` and ``-i`` on its conjugate."""
    dim = algebra.dim
    lsp = annihilator(rho, dim)
    if lsp.dim != dim:
        raise InvalidStructureError(f"annihilator has dimension {lsp.dim}, expected {dim}")
    lbar = lsp.conj()
    if lsp.intersect(lbar).dim:
        raise InvalidStructureError("annihilator meets its conjugate: spinor is not definite")
    q = Matrix(2 * dim, 2 * dim, list(lsp.basis) + list(lbar.basis))
    diag = Matrix(2 * dim, 2 * dim, [{k: I if k < dim else -I} for k in range(2 * dim)])
    endo = q @ diag @ q.inverse()
    if not endo.is_real():
        raise InvalidStructureError("reconstructed endomorphism is not real")
    g = GenStructure(endo, algebra, rho, label)
    validate_endo(endo, dim)
    return g


def gtype(g: GenStructure) -> int:
    """``dim(V* cap J V*) / 2``."""
    dim = g.dim
    cov = Subspace.span(2 * dim, ({dim + i: ONE} for i in range(dim)))
    jcov = cov.map(g.endo)
    return cov.intersect(jcov).dim // 2


def spinor_type(rho: Form) -> int:
    """Lowest degree carried by the spinor."""
    return min(popcount(m) for m in rho.terms)


# ---------------------------------------------------------------------------
# Courant bracket and integrability

def courant(a: GVector, b: GVector, algebra: LieAlgebra) -> GVector:
    """``[X,Y] + L_X eta - L_Y xi - d(iota_X eta - iota_Y xi) / 2`` on invariant sections."""
    x, xi = a.vec, covector(a.covec)
    y, eta = b.vec, covector(b.covec)
    vec = algebra.bracket(x, y)
    form = algebra.lie_derivative(x, eta) - algebra.lie_derivative(y, xi)
    form = form - algebra.d(contract_vec(x, eta) - contract_vec(y, xi)) * Fraction(1, 2)
    return GVector.make(vec, form_as_covector(form, algebra.dim) if form else [ZERO] * algebra.dim)


def nijenhuis(g: GenStructure, a: GVector, b: GVector) -> GVector:
    """``[Ja, Jb] - J[Ja, b] - J[a, Jb] - [a, b]``."""
    alg = g.algebra
    ja, jb = g.apply(a), g.apply(b)
    mixed = courant(ja, b, alg) + courant(a, jb, alg)
    return courant(ja, jb, alg) - g.apply(mixed) - courant(a, b, alg)


@dataclass(frozen=True)
class Integrability:
    integrable: bool
    witness: tuple[int, int] | None = None
    value: GVector | None = None

    def __bool__(self) -> bool:
        return self.integrable


def basis_gvectors(dim: int) -> list[GVector]:
    out = []
    for k in range(2 * dim):
        c = [ZERO] * (2 * dim)
        c[k] = ONE
        out.append(GVector.from_coords(c))
    return out


def integrable(g: GenStructure) -> Integrability:
    """Evaluate the Nijenhuis tensor on all pairs of basis sections; report the first nonzero pair."""
    if "integrable" in g._cache:
        return g._cache["integrable"]
    basis = basis_gvectors(g.dim)
    result = Integrability(True)
    for (ia, a), (ib, b) in product(enumerate(basis), repeat=2):
        if ib <= ia:
            continue
        v = nijenhuis(g, a, b)
        if any(not c.is_zero() for c in v.coords()):
            result = Integrability(False, (ia, ib), v)
            break
    g._cache["integrable"] = result
    return result


# ---------------------------------------------------------------------------
# B- and beta-transforms

def b_field_matrix(bform: Form, dim: int) -> Matrix:
    """``exp(B) = [[1, 0], [B, 1]]`` with ``B(X) = iota_X B``."""
    bm = symplectic_matrix(bform, dim)
    return _block(Matrix.identity(dim), Matrix.zero(dim, dim), bm, Matrix.identity(dim))


def b_transform(g: GenStructure, bform: Form, check_closed: bool = True, label: str = "") -> GenStructure:
    """``exp(-B) J exp(B)`` acting on the spinor line as ``exp(B) ^``.

    A complex ``B`` acts on the spinor only; the endomorphism is then rebuilt
    from the new spinor.
    """
    if bform.degrees() - {2}:
        raise ValidationError("B-field must be a 2-form")
    if check_closed and not g.algebra.d(bform).is_zero():
        raise ValidationError("B-field is not closed")
    rho = exp_form(bform) ^ g.canonical_generator() if not bform.is_zero() else g.canonical_generator()
    if not bform.is_real():
        return from_spinor(rho, g.algebra, label)
    e = b_field_matrix(bform, g.dim)
    einv = b_field_matrix(-bform, g.dim)
    endo = einv @ g.endo @ e
    return GenStructure(endo, g.algebra, rho, label or g.label)


def beta_transform(rho: Form, beta: Bivector) -> Form:
    return exp_bivec(beta, rho)


def nondegeneracy_check(u: Form, omega: Form, dim: int) -> Scalar:
    """Top coefficient of ``u ^ conj(u) ^ omega^(n-1)``; nonzero means ``exp(omega) ^ u``-type
    spinors (``u`` a 1-form) define a structure of type 1."""
    if u.degrees() - {1}:
        raise ValidationError("u must be a 1-form")
    power = ONE_FORM
    for _ in range(dim // 2 - 1):
        power = wedge(power, omega)
    return top_coefficient(u ^ u.conj() ^ power, dim)
