"""Exact linear algebra over Q(i) on sparse vectors.

Vectors are ``dict[int, Scalar]`` with no stored zeros.  Subspaces are kept in
reduced row echelon form (pivot = first nonzero column), which is canonical,
so two equal subspaces always compare equal structurally.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .errors import ValidationError
from .scalars import ONE, ZERO, Number, Scalar, as_scalar

Vec = dict[int, Scalar]


def _axpy(target: Vec, a: Scalar, x: Mapping[int, Scalar]) -> None:
    for k, v in x.items():
        cur = target.get(k)
        new = a * v if cur is None else cur + a * v
        if new.is_zero():
            target.pop(k, None)
        else:
            target[k] = new


def scale(v: Mapping[int, Scalar], c: Scalar) -> Vec:
    if c.is_zero():
        return {}
    return {k: x * c for k, x in v.items()}


def vec_from_dense(values: Sequence[Number]) -> Vec:
    out = {}
    for i, x in enumerate(values):
        x = as_scalar(x)
        if not x.is_zero():
            out[i] = x
    return out


def vec_to_dense(v: Mapping[int, Scalar], n: int) -> list[Scalar]:
    return [v.get(i, ZERO) for i in range(n)]


class Echelon:
    """Incremental reduced echelon basis.  ``rows[pivot]`` has a 1 at ``pivot`` and
    zeros at every other pivot column."""

    __slots__ = ("rows",)

    def __init__(self) -> None:
        self.rows: dict[int, Vec] = {}

    def reduce(self, v: Mapping[int, Scalar]) -> Vec:
        """Remainder of ``v`` modulo the span (zero at every pivot column)."""
        w = dict(v)
        rows = self.rows
        for p in [k for k in w if k in rows]:
            c = w.get(p)
            if c is not None:
                _axpy(w, -c, rows[p])
        return w

    def add(self, v: Mapping[int, Scalar]) -> bool:
        w = self.reduce(v)
        if not w:
            return False
        p = min(w)
        inv = w[p].inv()
        w = {k: x * inv for k, x in w.items()}
        for row in self.rows.values():
            c = row.get(p)
            if c is not None:
                _axpy(row, -c, w)
        self.rows[p] = w
        return True

    def contains(self, v: Mapping[int, Scalar]) -> bool:
        return not self.reduce(v)

    def basis(self) -> tuple[tuple[int, Vec], ...]:
        return tuple(sorted(self.rows.items()))


class Subspace:
    """A subspace of ``Q(i)^ambient_dim`` stored by its canonical RREF basis."""

    __slots__ = ("ambient_dim", "_rows", "_pivots")

    def __init__(self, ambient_dim: int, rows: Iterable[tuple[int, Vec]] = ()) -> None:
        self.ambient_dim = ambient_dim
        rows = tuple(rows)
        self._pivots = tuple(p for p, _ in rows)
        self._rows = tuple(r for _, r in rows)

    @classmethod
    def span(cls, ambient_dim: int, vectors: Iterable[Mapping[int, Scalar]]) -> Subspace:
        ech = Echelon()
        for v in vectors:
            if v and max(v) >= ambient_dim:
                raise ValidationError("vector outside ambient space")
            ech.add({i: as_scalar(x) for i, x in v.items()})
        return cls(ambient_dim, ech.basis())

    @classmethod
    def zero(cls, ambient_dim: int) -> Subspace:
        return cls(ambient_dim)

    @classmethod
    def full(cls, ambient_dim: int) -> Subspace:
        return cls(ambient_dim, ((i, {i: ONE}) for i in range(ambient_dim)))

    @property
    def basis(self) -> tuple[Vec, ...]:
        return self._rows

    @property
    def pivots(self) -> tuple[int, ...]:
        return self._pivots

    @property
    def dim(self) -> int:
        return len(self._rows)

    def __len__(self) -> int:
        return self.dim

    def _echelon(self) -> Echelon:
        ech = Echelon()
        ech.rows = {p: dict(r) for p, r in zip(self._pivots, self._rows)}
        return ech

    def reduce(self, v: Mapping[int, Scalar]) -> Vec:
        w = dict(v)
        for p, row in zip(self._pivots, self._rows):
            c = w.get(p)
            if c is not None:
                _axpy(w, -c, row)
        return w

    def member(self, v: Mapping[int, Scalar]) -> bool:
        return not self.reduce(v)

    __contains__ = member

    def coordinates(self, v: Mapping[int, Scalar]) -> list[Scalar]:
        """Coefficients of ``v`` in the stored basis; ``v`` must lie in the subspace."""
        if not self.member(v):
            raise ValueError("vector not in subspace")
        return [v.get(p, ZERO) for p in self._pivots]

    def _check(self, other: Subspace) -> None:
        if self.ambient_dim != other.ambient_dim:
            raise ValueError(f"ambient dimensions differ: {self.ambient_dim} != {other.ambient_dim}")

    def sum(self, other: Subspace) -> Subspace:
        self._check(other)
        ech = self._echelon()
        for r in other._rows:
            ech.add(r)
        return Subspace(self.ambient_dim, ech.basis())

    __add__ = sum

    def intersect(self, other: Subspace) -> Subspace:
        """Zassenhaus: reduce rows ``(a | a)`` and ``(b | 0)``; rows with empty left half span the meet."""
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient_dim)
        n = self.ambient_dim
        ech = Echelon()
        for r in self._rows:
            w = dict(r)
            w.update({k + n: x for k, x in r.items()})
            ech.add(w)
        for r in other._rows:
            ech.add(r)
        meet = [{k - n: x for k, x in row.items()} for p, row in ech.basis() if p >= n]
        return Subspace.span(n, meet)

    __and__ = intersect

    def contains_subspace(self, other: Subspace) -> bool:
        self._check(other)
        return all(self.member(r) for r in other._rows)

    def __le__(self, other: Subspace) -> bool:
        return other.contains_subspace(self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self._pivots == other._pivots and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self._pivots))

    def conj(self) -> Subspace:
        return Subspace.span(self.ambient_dim, ({k: x.conj() for k, x in r.items()} for r in self._rows))

    def map(self, m: Matrix) -> Subspace:
        return Subspace.span(m.nrows, (m.apply(r) for r in self._rows))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


class Matrix:
    """Sparse matrix over Q(i), stored by columns."""

    __slots__ = ("nrows", "ncols", "cols")

    def __init__(self, nrows: int, ncols: int, cols: Sequence[Mapping[int, Scalar]] | None = None) -> None:
        self.nrows = nrows
        self.ncols = ncols
        if cols is None:
            self.cols = tuple({} for _ in range(ncols))
        else:
            if len(cols) != ncols:
                raise ValueError("column count mismatch")
            self.cols = tuple({i: as_scalar(x) for i, x in c.items() if not as_scalar(x).is_zero()} for c in cols)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Number]]) -> Matrix:
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        cols: list[Vec] = [{} for _ in range(ncols)]
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise ValidationError("ragged matrix")
            for j, x in enumerate(row):
                x = as_scalar(x)
                if not x.is_zero():
                    cols[j][i] = x
        return cls(nrows, ncols, cols)

    @classmethod
    def identity(cls, n: int, c: Number = 1) -> Matrix:
        c = as_scalar(c)
        return cls(n, n, [{i: c} if not c.is_zero() else {} for i in range(n)])

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> Matrix:
        return cls(nrows, ncols)

    def entry(self, i: int, j: int) -> Scalar:
        return self.cols[j].get(i, ZERO)

    def rows(self) -> list[list[Scalar]]:
        out = [[ZERO] * self.ncols for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, x in col.items():
                out[i][j] = x
        return out

    def row_vectors(self) -> list[Vec]:
        out: list[Vec] = [{} for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, x in col.items():
                out[i][j] = x
        return out

    def apply(self, v: Mapping[int, Scalar]) -> Vec:
        out: Vec = {}
        cols = self.cols
        for j, x in v.items():
            _axpy(out, x, cols[j])
        return out

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        return Matrix(self.nrows, other.ncols, [self.apply(c) for c in other.cols])

    def __add__(self, other: Matrix) -> Matrix:
        self._same(other)
        cols = []
        for a, b in zip(self.cols, other.cols):
            c = dict(a)
            _axpy(c, ONE, b)
            cols.append(c)
        return Matrix(self.nrows, self.ncols, cols)

    def __sub__(self, other: Matrix) -> Matrix:
        return self + other * -1

    def __mul__(self, c: Number) -> Matrix:
        c = as_scalar(c)
        return Matrix(self.nrows, self.ncols, [scale(col, c) for col in self.cols])

    __rmul__ = __mul__

    def __neg__(self) -> Matrix:
        return self * -1

    def _same(self, other: Matrix) -> None:
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.nrows, self.ncols) == (other.nrows, other.ncols) and self.cols == other.cols

    def __hash__(self) -> int:
        return hash((self.nrows, self.ncols))

    def is_zero(self) -> bool:
        return not any(self.cols)

    def transpose(self) -> Matrix:
        return Matrix(self.ncols, self.nrows, self.row_vectors())

    def conj(self) -> Matrix:
        return Matrix(self.nrows, self.ncols, [{i: x.conj() for i, x in c.items()} for c in self.cols])

    def is_real(self) -> bool:
        return all(x.is_real() for c in self.cols for x in c.values())

    def restrict_columns(self, idx: Sequence[int]) -> Matrix:
        return Matrix(self.nrows, len(idx), [self.cols[j] for j in idx])

    def inverse(self) -> Matrix:
        if self.nrows != self.ncols:
            raise ValueError("only square matrices are invertible")
        n = self.nrows
        ech = Echelon()
        for i, row in enumerate(self.row_vectors()):
            w = dict(row)
            w[n + i] = ONE
            ech.add(w)
        basis = ech.basis()
        if len(basis) != n or any(p >= n for p, _ in basis):
            raise ZeroDivisionError("matrix is singular")
        inv_rows = [{k - n: x for k, x in row.items() if k >= n} for _, row in basis]
        cols: list[Vec] = [{} for _ in range(n)]
        for i, row in enumerate(inv_rows):
            for j, x in row.items():
                cols[j][i] = x
        return Matrix(n, n, cols)

    def __repr__(self) -> str:
        return f"Matrix({self.nrows}x{self.ncols})"


def image(m: Matrix) -> Subspace:
    return Subspace.span(m.nrows, m.cols)


def rank(m: Matrix) -> int:
    return image(m).dim


def kernel(m: Matrix) -> Subspace:
    ech = Echelon()
    for row in m.row_vectors():
        ech.add(row)
    pivots = set(ech.rows)
    null = []
    for f in range(m.ncols):
        if f in pivots:
            continue
        v: Vec = {f: ONE}
        for p, row in ech.rows.items():
            c = row.get(f)
            if c is not None:
                v[p] = -c
        null.append(v)
    return Subspace.span(m.ncols, null)


def preimage(m: Matrix, target: Subspace) -> Subspace:
    """``{v : m v in target}``."""
    # compose with the quotient by target: rows of m reduced modulo target vanish
    comp_cols = [target.reduce(c) for c in m.cols]
    return kernel(Matrix(m.nrows, m.ncols, comp_cols))


class CohomSpace:
    """Quotient ``cocycles / coboundaries`` with a canonical representative basis.

    Representatives are the echelon completion of the coboundaries inside the
    cocycles: cocycle rows reduced modulo the coboundaries and re-echelonized,
    so their pivots avoid the coboundary pivots.
    """

    def __init__(self, cocycles: Subspace, coboundaries: Subspace) -> None:
        if not cocycles.contains_subspace(coboundaries):
            raise ValidationError("coboundaries are not contained in cocycles")
        self.cocycles = cocycles
        self.coboundaries = coboundaries
        ech = Echelon()
        for r in cocycles.basis:
            ech.add(coboundaries.reduce(r))
        rows = ech.basis()
        self._rep_pivots = tuple(p for p, _ in rows)
        self.rep_basis: tuple[Vec, ...] = tuple(r for _, r in rows)

    @property
    def dim(self) -> int:
        return len(self.rep_basis)

    @property
    def ambient_dim(self) -> int:
        return self.cocycles.ambient_dim

    def project(self, v: Mapping[int, Scalar]) -> list[Scalar]:
        """Coordinates of the class of a cocycle ``v`` in the representative basis."""
        if not self.cocycles.member(v):
            raise ValueError("not a cocycle")
        w = self.coboundaries.reduce(v)
        return [w.get(p, ZERO) for p in self._rep_pivots]

    def project_vec(self, v: Mapping[int, Scalar]) -> Vec:
        return vec_from_dense(self.project(v))

    def lift(self, coords: Sequence[Number]) -> Vec:
        out: Vec = {}
        for c, r in zip(coords, self.rep_basis):
            _axpy(out, as_scalar(c), r)
        return out

    def is_exact(self, v: Mapping[int, Scalar]) -> bool:
        return self.coboundaries.member(v)

    def subgroup_image(self, s: Subspace) -> Subspace:
        """``(S + B) / B`` in quotient coordinates, for ``S`` inside the cocycles."""
        return Subspace.span(self.dim, (self.project_vec(r) for r in s.basis))

    def classes_span(self, vectors: Iterable[Mapping[int, Scalar]]) -> Subspace:
        return Subspace.span(self.dim, (self.project_vec(v) for v in vectors))

    def full(self) -> Subspace:
        return Subspace.full(self.dim)


def quotient(z: Subspace, b: Subspace) -> CohomSpace:
    return CohomSpace(z, b)
