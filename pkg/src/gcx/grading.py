"""The ``U^k`` grading of complex forms defined by a generalized structure, and the
splitting of ``d`` into its graded pieces."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

from .errors import InternalError, InvalidStructureError
from .exterior import Bivector, Form, LieAlgebra, clifford, contract_bivec, exp_form, popcount, wedge
from .gcs import GenStructure, gvector, symplectic_matrix
from .scalars import I, ONE, Scalar
from .subspace import Matrix, Subspace, Vec


def form_matrix(op, dim: int) -> Matrix:
    """Matrix of a linear operator on forms, columns indexed by bitmask."""
    return Matrix(1 << dim, 1 << dim, [dict(op(Form({m: ONE})).terms) for m in range(1 << dim)])


def d_matrix(algebra: LieAlgebra) -> Matrix:
    return Matrix(1 << algebra.dim, 1 << algebra.dim, [dict(algebra.d_basis(m).terms) for m in range(1 << algebra.dim)])


@dataclass(frozen=True, eq=False)
class Grading:
    """``pieces[k]`` for ``k = -n..n``; ``basis`` lists the echelon bases of the pieces
    from ``k = n`` down to ``k = -n``, and ``P`` has them as columns."""

    pieces: dict[int, Subspace]
    source: GenStructure
    basis: tuple[Vec, ...]
    degree: tuple[int, ...]
    P: Matrix
    Pinv: Matrix
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return self.source.n

    def dims(self) -> dict[int, int]:
        return {k: s.dim for k, s in self.pieces.items()}

    def piece(self, k: int) -> Subspace:
        return self.pieces.get(k, Subspace.zero(1 << self.source.dim))

    def coords(self, f: Form | Vec) -> Vec:
        return self.Pinv.apply(f.terms if isinstance(f, Form) else f)

    def project_vec(self, v: Vec, k: int) -> Vec:
        c = self.coords(v)
        return self.P.apply({j: x for j, x in c.items() if self.degree[j] == k})

    def to_u(self, m: Matrix) -> Matrix:
        return self.Pinv @ m @ self.P

    def from_u(self, m: Matrix) -> Matrix:
        return self.P @ m @ self.Pinv


def build_grading(g: GenStructure) -> Grading:
    if "grading" in g._cache:
        return g._cache["grading"]
    dim, n = g.dim, g.n
    ambient = 1 << dim
    rho = g.canonical_generator()
    lbar = [gvector(v, dim) for v in g.minus_eigenspace().basis]
    pieces: dict[int, Subspace] = {}
    for k in range(n, -n - 1, -1):
        spanning = []
        for subset in combinations(lbar, n - k):
            f = rho
            for v in reversed(subset):
                f = clifford(v, f)
            spanning.append(f.terms)
        pieces[k] = Subspace.span(ambient, spanning)
        if pieces[k].dim != comb(dim, n - k):
            raise InvalidStructureError(f"dim U^{k} = {pieces[k].dim}, expected {comb(dim, n - k)}")
    basis, degree = [], []
    for k in range(n, -n - 1, -1):
        basis += pieces[k].basis
        degree += [k] * pieces[k].dim
    if len(basis) != ambient:
        raise InvalidStructureError("grading pieces do not fill the exterior algebra")
    P = Matrix(ambient, ambient, basis)
    gr = Grading(pieces, g, tuple(basis), tuple(degree), P, P.inverse())
    g._cache["grading"] = gr
    return gr


def project(f: Form, gr: Grading) -> dict[int, Form]:
    c = gr.coords(f)
    out: dict[int, Form] = {}
    for k in gr.pieces:
        part = gr.P.apply({j: x for j, x in c.items() if gr.degree[j] == k})
        if part:
            out[k] = Form(part)
    return out


def shift_blocks(gr: Grading, m: Matrix) -> dict[int, Matrix]:
    """Split an operator (given in form coordinates) by how much it shifts ``k``;
    each block is returned in form coordinates again."""
    mu = gr.to_u(m)
    size = mu.ncols
    blocks: dict[int, list[Vec]] = {}
    for j, col in enumerate(mu.cols):
        for i, x in col.items():
            s = gr.degree[i] - gr.degree[j]
            blocks.setdefault(s, [dict() for _ in range(size)])[j][i] = x
    return {s: gr.from_u(Matrix(size, size, cols)) for s, cols in sorted(blocks.items())}


@dataclass(frozen=True)
class DiffSplit:
    """``d = A + del + delbar + Abar``: shifts ``+3, +1, -1, -3`` of the grading index."""

    A: Matrix
    delta: Matrix
    delbar: Matrix
    Abar: Matrix
    shifts: tuple[int, ...]

    def total(self) -> Matrix:
        return self.A + self.delta + self.delbar + self.Abar

    @property
    def integrable(self) -> bool:
        return self.A.is_zero() and self.Abar.is_zero()


SPLIT_SHIFTS = (3, 1, -1, -3)


def split_d(gr: Grading) -> DiffSplit:
    if "split" in gr._cache:
        return gr._cache["split"]
    dm = d_matrix(gr.source.algebra)
    blocks = shift_blocks(gr, dm)
    stray = [s for s, b in blocks.items() if s not in SPLIT_SHIFTS and not b.is_zero()]
    if stray:
        raise InternalError(f"d has components shifting the grading by {stray}")
    size = dm.ncols
    z = Matrix.zero(size, size)
    parts = [blocks.get(s, z) for s in SPLIT_SHIFTS]
    ds = DiffSplit(*parts, shifts=tuple(s for s, b in blocks.items() if not b.is_zero()))
    if ds.total() != dm:
        raise InternalError("split_d residual is nonzero")
    gr._cache["split"] = ds
    return ds


# ---------------------------------------------------------------------------
# Symplectic operators

def poisson_bivector(omega: Form, dim: int) -> Bivector:
    """``pi = -omega^{-1}`` as a bivector; for ``omega = e12`` this is ``e_12``."""
    w = symplectic_matrix(omega, dim).transpose()  # w[i][j] = omega(e_i, e_j)
    winv = w.inverse()
    return Bivector({(i + 1, j + 1): -winv.entry(i, j) for i in range(dim) for j in range(i + 1, dim)})


def lefschetz(omega: Form, dim: int) -> Matrix:
    return form_matrix(lambda f: wedge(omega, f), dim)


def dual_lefschetz(omega: Form, dim: int) -> Matrix:
    """``Lambda``: contraction with the Poisson bivector, fixed so that
    ``[L, Lambda] = (k - n)`` on ``k``-forms."""
    pi = poisson_bivector(omega, dim)
    return form_matrix(lambda f: contract_bivec(pi, f), dim)


def degree_operator(dim: int, shift: int = 0) -> Matrix:
    return Matrix(1 << dim, 1 << dim, [{m: Scalar(popcount(m) + shift)} for m in range(1 << dim)])


def d_lambda(algebra: LieAlgebra, omega: Form) -> Matrix:
    """``[d, Lambda] = d Lambda - Lambda d``."""
    dm = d_matrix(algebra)
    lam = dual_lefschetz(omega, algebra.dim)
    return dm @ lam - lam @ dm


def _exp_nilpotent(m: Matrix, c: Scalar) -> Matrix:
    size = m.ncols
    total = Matrix.identity(size)
    term = Matrix.identity(size)
    k = 1
    while True:
        term = (m @ term) * (c * Fraction(1, k))
        if term.is_zero():
            return total
        total = total + term
        k += 1


def phi_map(omega: Form, dim: int) -> Matrix:
    """``alpha -> exp(i omega) ^ exp(-Lambda / 2i) alpha`` as a ``2^dim`` square matrix.

    With ``Lambda`` normalised by ``[L, Lambda] = k - n`` this is the choice that
    gives ``phi d = delbar phi`` and ``phi d^Lambda = -2i del phi``; in terms of
    ``-Lambda`` it is the series ``exp(Lambda' / 2i)``.
    """
    lam = dual_lefschetz(omega, dim)
    ex_lam = _exp_nilpotent(lam, -(I * 2).inv())
    ex_om = form_matrix(lambda f: wedge(exp_form(omega * I), f), dim)
    return ex_om @ ex_lam
