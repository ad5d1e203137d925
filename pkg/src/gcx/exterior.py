"""Complexified exterior algebra of the dual of a Lie algebra.

Basis monomials are bitmasks: bit ``i`` set means the generator ``e^{i+1}``
is present, and a monomial is always read in ascending index order.  The
same encoding is used for polyvectors (``e_i`` instead of ``e^i``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import ValidationError
from .scalars import ONE, ZERO, Number, Scalar, as_scalar


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def mask_indices(mask: int) -> list[int]:
    """Zero-based indices of the set bits, ascending."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def indices_mask(indices: Iterable[int]) -> tuple[int, int]:
    """``(sign, mask)`` of the ordered product of zero-based generators; sign 0 on repeats."""
    mask, sign = 0, 1
    for i in indices:
        bit = 1 << i
        if mask & bit:
            return 0, 0
        # moving e^i past every higher generator already present
        if popcount(mask >> (i + 1)) & 1:
            sign = -sign
        mask |= bit
    return sign, mask


def wedge_sign(a: int, b: int) -> int:
    """Sign of ``e^a ^ e^b`` relative to ``e^(a|b)``; 0 when they share a generator."""
    if a & b:
        return 0
    swaps = 0
    while b:
        low = b & -b
        swaps += popcount(a & ~((low << 1) - 1))
        b ^= low
    return -1 if swaps & 1 else 1


class Form:
    """Sparse element of the complexified exterior algebra, immutable.

    ``terms`` maps bitmask to a nonzero :class:`Scalar`.  Products with ``^``
    are wedge products; ``*`` by a number is scalar multiplication.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, Number] | None = None) -> None:
        clean: dict[int, Scalar] = {}
        if terms:
            for m, c in terms.items():
                c = as_scalar(c)
                if not c.is_zero():
                    clean[m] = c
        object.__setattr__(self, "terms", clean)

    @classmethod
    def _wrap(cls, terms: dict[int, Scalar]) -> Form:
        obj = object.__new__(cls)
        object.__setattr__(obj, "terms", terms)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("Form is immutable")

    @classmethod
    def monomial(cls, *indices: int, coeff: Number = 1) -> Form:
        """``coeff * e^{i1} ^ ... ^ e^{ik}`` with one-based indices."""
        sign, mask = indices_mask(i - 1 for i in indices)
        if sign == 0:
            return ZERO_FORM
        return cls({mask: as_scalar(coeff) * sign})

    @classmethod
    def scalar(cls, c: Number) -> Form:
        return cls({0: c})

    # inspection -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {popcount(m) for m in self.terms}

    def component(self, degree: int) -> Form:
        return Form._wrap({m: c for m, c in self.terms.items() if popcount(m) == degree})

    def coeff(self, mask: int) -> Scalar:
        return self.terms.get(mask, ZERO)

    def max_index(self) -> int:
        """Largest one-based generator index present (0 for scalars)."""
        top = 0
        for m in self.terms:
            top = max(top, m.bit_length())
        return top

    def __iter__(self) -> Iterator[tuple[int, Scalar]]:
        return iter(sorted(self.terms.items()))

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Form):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction, Scalar)):
            return self == Form.scalar(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        from .structlang import print_form

        return f"Form({print_form(self)!r})"

    # linear structure -------------------------------------------------

    def __add__(self, other: Form | Number) -> Form:
        if not isinstance(other, Form):
            other = Form.scalar(other)
        out = dict(self.terms)
        axpy(out, ONE, other.terms)
        return Form._wrap(out)

    __radd__ = __add__

    def __sub__(self, other: Form | Number) -> Form:
        if not isinstance(other, Form):
            other = Form.scalar(other)
        out = dict(self.terms)
        axpy(out, -ONE, other.terms)
        return Form._wrap(out)

    def __rsub__(self, other: Number) -> Form:
        return Form.scalar(other) - self

    def __neg__(self) -> Form:
        return Form._wrap({m: -c for m, c in self.terms.items()})

    def __mul__(self, c: Number) -> Form:
        if isinstance(c, Form):
            return wedge(self, c)
        c = as_scalar(c)
        if c.is_zero():
            return ZERO_FORM
        return Form._wrap({m: x * c for m, x in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, c: Number) -> Form:
        return self * as_scalar(c).inv()

    def __xor__(self, other: Form | Number) -> Form:
        if not isinstance(other, Form):
            return self * other
        return wedge(self, other)

    def __rxor__(self, other: Number) -> Form:
        return self * other

    def conj(self) -> Form:
        return Form._wrap({m: c.conj() for m, c in self.terms.items()})

    def is_real(self) -> bool:
        return all(c.is_real() for c in self.terms.values())


ZERO_FORM = Form()
ONE_FORM = Form({0: ONE})


def axpy(target: dict[int, Scalar], a: Scalar, x: Mapping[int, Scalar]) -> None:
    """In place ``target += a * x`` on sparse coefficient dicts, dropping zeros."""
    for k, v in x.items():
        cur = target.get(k)
        new = a * v if cur is None else cur + a * v
        if new.is_zero():
            target.pop(k, None)
        else:
            target[k] = new


def basis_form(mask: int) -> Form:
    return Form._wrap({mask: ONE})


def wedge(a: Form, b: Form) -> Form:
    out: dict[int, Scalar] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            s = wedge_sign(ma, mb)
            if s == 0:
                continue
            m = ma | mb
            v = ca * cb if s > 0 else -(ca * cb)
            cur = out.get(m)
            if cur is not None:
                v = cur + v
            if v.is_zero():
                out.pop(m, None)
            else:
                out[m] = v
    return Form._wrap(out)


def wedge_all(forms: Iterable[Form]) -> Form:
    out = ONE_FORM
    for f in forms:
        out = wedge(out, f)
    return out


def exp_form(f: Form) -> Form:
    """``sum f^k / k!`` for an even form without scalar part (the series terminates)."""
    if f.terms and (0 in f.terms or any(popcount(m) & 1 for m in f.terms)):
        raise ValueError("exp needs an even form with no degree-0 part")
    out, power, k = ONE_FORM, ONE_FORM, 0
    while True:
        k += 1
        power = wedge(power, f)
        if power.is_zero():
            return out
        out = out + power * Fraction(1, factorial(k))


def reversal(f: Form) -> Form:
    """The anti-automorphism reversing monomials: sign ``(-1)^(l(l-1)/2)`` in degree ``l``."""
    out = {}
    for m, c in f.terms.items():
        l = popcount(m)
        out[m] = -c if (l * (l - 1) // 2) & 1 else c
    return Form._wrap(out)


def contract_index(i: int, f: Form) -> Form:
    """Interior product with the zero-based basis vector ``e_{i+1}``."""
    bit = 1 << i
    below = bit - 1
    out = {}
    for m, c in f.terms.items():
        if m & bit:
            out[m ^ bit] = -c if popcount(m & below) & 1 else c
    return Form._wrap(out)


def contract_vec(x: Sequence[Number], f: Form) -> Form:
    """Interior product ``iota_X f`` with ``X = sum x[i] e_{i+1}``."""
    out: dict[int, Scalar] = {}
    for i, xi in enumerate(x):
        xi = as_scalar(xi)
        if not xi.is_zero():
            axpy(out, xi, contract_index(i, f).terms)
    return Form._wrap(out)


def covector(xi: Sequence[Number]) -> Form:
    return Form({1 << i: c for i, c in enumerate(xi)})


def form_as_covector(f: Form, dim: int) -> list[Scalar]:
    if any(popcount(m) != 1 for m in f.terms):
        raise ValueError("not a 1-form")
    return [f.coeff(1 << i) for i in range(dim)]


@dataclass(frozen=True)
class GVector:
    """``X + xi`` in ``(V + V*) (x) C``: vector components and covector components."""

    vec: tuple[Scalar, ...]
    covec: tuple[Scalar, ...]

    @classmethod
    def make(cls, vec: Sequence[Number], covec: Sequence[Number]) -> GVector:
        return cls(tuple(as_scalar(v) for v in vec), tuple(as_scalar(v) for v in covec))

    @classmethod
    def from_coords(cls, coords: Sequence[Number]) -> GVector:
        """Split a length ``2 * dim`` coordinate list (vector part first)."""
        h = len(coords) // 2
        return cls.make(coords[:h], coords[h:])

    @property
    def dim(self) -> int:
        return len(self.vec)

    def coords(self) -> list[Scalar]:
        return list(self.vec) + list(self.covec)

    def conj(self) -> GVector:
        return GVector(tuple(v.conj() for v in self.vec), tuple(v.conj() for v in self.covec))

    def __add__(self, other: GVector) -> GVector:
        return GVector(
            tuple(a + b for a, b in zip(self.vec, other.vec)),
            tuple(a + b for a, b in zip(self.covec, other.covec)),
        )

    def __sub__(self, other: GVector) -> GVector:
        return self + other * -1

    def __mul__(self, c: Number) -> GVector:
        c = as_scalar(c)
        return GVector(tuple(a * c for a in self.vec), tuple(a * c for a in self.covec))

    __rmul__ = __mul__


def clifford(v: GVector, f: Form) -> Form:
    """``(X + xi) . f = iota_X f + xi ^ f``."""
    return contract_vec(v.vec, f) + wedge(covector(v.covec), f)


def pairing(v: GVector, w: GVector) -> Scalar:
    """``<X + xi, Y + eta> = (xi(Y) + eta(X)) / 2``."""
    s = ZERO
    for a, b in zip(v.covec, w.vec):
        s = s + a * b
    for a, b in zip(w.covec, v.vec):
        s = s + a * b
    return s * Fraction(1, 2)


def top_coefficient(f: Form, dim: int) -> Scalar:
    return f.coeff((1 << dim) - 1)


def mukai(a: Form, b: Form, dim: int) -> Scalar:
    """``(reversal(a) ^ b)_top``."""
    return top_coefficient(wedge(reversal(a), b), dim)


class Bivector:
    """Sparse antisymmetric 2-vector ``sum_{i<j} b_ij e_i ^ e_j`` (one-based pairs as keys).

    Contraction convention: ``iota_{u^v} = iota_v o iota_u``, so that
    ``iota_{e_i ^ e_j} e^{ij} = 1``.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int], Number] | None = None) -> None:
        clean: dict[tuple[int, int], Scalar] = {}
        for (i, j), c in (terms or {}).items():
            c = as_scalar(c)
            if i == j:
                continue
            if i > j:
                i, j, c = j, i, -c
            cur = clean.get((i, j), ZERO) + c
            if cur.is_zero():
                clean.pop((i, j), None)
            else:
                clean[(i, j)] = cur
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Bivector is immutable")

    @classmethod
    def from_polyvector(cls, f: Form) -> Bivector:
        """Read a degree-2 element of the polyvector algebra (same bitmask encoding)."""
        out = {}
        for m, c in f.terms.items():
            idx = mask_indices(m)
            if len(idx) != 2:
                raise ValueError("not a bivector")
            out[(idx[0] + 1, idx[1] + 1)] = c
        return cls(out)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Bivector) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __neg__(self) -> Bivector:
        return Bivector({k: -c for k, c in self.terms.items()})

    def __mul__(self, c: Number) -> Bivector:
        c = as_scalar(c)
        return Bivector({k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __add__(self, other: Bivector) -> Bivector:
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, ZERO) + c
        return Bivector(out)

    def __repr__(self) -> str:
        return f"Bivector({ {k: str(v) for k, v in sorted(self.terms.items())} })"

    def is_zero(self) -> bool:
        return not self.terms


def contract_bivec(beta: Bivector, f: Form) -> Form:
    out: dict[int, Scalar] = {}
    for (i, j), c in beta.terms.items():
        axpy(out, c, contract_index(j - 1, contract_index(i - 1, f)).terms)
    return Form._wrap(out)


def exp_bivec(beta: Bivector, f: Form) -> Form:
    """``sum_k iota_beta^k f / k!``; terminates because each term drops degree by 2."""
    out, term, k = f, f, 0
    while True:
        k += 1
        term = contract_bivec(beta, term) * Fraction(1, k)
        if term.is_zero():
            return out
        out = out + term


class LieAlgebra:
    """A Lie algebra given by the differential of its dual generators.

    ``diff1[i]`` maps ``(j, k)`` (one-based, ``j < k``) to the coefficient of
    ``e^{jk}`` in ``d e^{i+1}``.
    """

    def __init__(self, dim: int, diff1: Sequence[Mapping[tuple[int, int], Number]], check: bool = True) -> None:
        if dim <= 0:
            raise ValidationError("dimension must be positive")
        if len(diff1) != dim:
            raise ValidationError(f"expected {dim} structure equations, got {len(diff1)}")
        self.dim = dim
        gens = []
        for i, entry in enumerate(diff1):
            terms: dict[int, Scalar] = {}
            for (j, k), c in entry.items():
                if not (1 <= j <= dim and 1 <= k <= dim):
                    raise ValidationError(f"index out of range in d e^{i + 1}: ({j}, {k})")
                f = Form.monomial(j, k, coeff=c)
                axpy(terms, ONE, f.terms)
            gens.append(Form._wrap(terms))
        self._d1 = tuple(gens)
        self._dcache: dict[int, Form] = {}
        if check:
            bad = self.jacobi_failures()
            if bad:
                from .errors import JacobiError
                from .structlang import print_form

                i, dd = bad[0]
                raise JacobiError(f"d(d e^{i}) = {print_form(dd)} != 0: structure constants violate Jacobi")

    @property
    def ambient(self) -> int:
        return 1 << self.dim

    def d_generator(self, i: int) -> Form:
        """``d e^i`` for one-based ``i``."""
        return self._d1[i - 1]

    def diff1(self) -> list[dict[tuple[int, int], Scalar]]:
        out = []
        for f in self._d1:
            entry = {}
            for m, c in sorted(f.terms.items()):
                j, k = mask_indices(m)
                entry[(j + 1, k + 1)] = c
            out.append(entry)
        return out

    def is_abelian(self) -> bool:
        return all(f.is_zero() for f in self._d1)

    def jacobi_failures(self) -> list[tuple[int, Form]]:
        bad = []
        for i in range(1, self.dim + 1):
            dd = self.d(self.d_generator(i))
            if not dd.is_zero():
                bad.append((i, dd))
        return bad

    def d_basis(self, mask: int) -> Form:
        hit = self._dcache.get(mask)
        if hit is not None:
            return hit
        if mask == 0:
            out = ZERO_FORM
        else:
            low = (mask & -mask).bit_length() - 1
            rest = mask ^ (1 << low)
            # d(e^low ^ rest) = d e^low ^ rest - e^low ^ d rest
            out = wedge(self._d1[low], basis_form(rest)) - wedge(basis_form(1 << low), self.d_basis(rest))
        self._dcache[mask] = out
        return out

    def d(self, f: Form) -> Form:
        out: dict[int, Scalar] = {}
        for m, c in f.terms.items():
            axpy(out, c, self.d_basis(m).terms)
        return Form._wrap(out)

    def bracket(self, x: Sequence[Number], y: Sequence[Number]) -> list[Scalar]:
        """Lie bracket of vectors, fixed by ``iota_[X,Y] = [L_X, iota_Y]`` (``de(X,Y) = -e([X,Y])``)."""
        out = []
        for i in range(self.dim):
            v = contract_vec(y, contract_vec(x, self._d1[i]))
            out.append(-v.coeff(0))
        return out

    def lie_derivative(self, x: Sequence[Number], f: Form) -> Form:
        """Cartan formula ``iota_X d f + d iota_X f``."""
        return contract_vec(x, self.d(f)) + self.d(contract_vec(x, f))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LieAlgebra) and self.dim == other.dim and self._d1 == other._d1

    def __hash__(self) -> int:
        return hash((self.dim, self._d1))

    def __repr__(self) -> str:
        return f"LieAlgebra(dim={self.dim})"


def d(f: Form, algebra: LieAlgebra) -> Form:
    return algebra.d(f)


def lie_derivative(x: Sequence[Number], f: Form, algebra: LieAlgebra) -> Form:
    return algebra.lie_derivative(x, f)


def masks_of_degree(dim: int, k: int) -> list[int]:
    return [m for m in range(1 << dim) if popcount(m) == k]
