"""Exact arithmetic in the Gaussian rationals Q(i), and rational points on the unit circle."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Union

Number = Union[int, Fraction, "Scalar"]


class Scalar:
    """An element ``(a + b*i) / q`` of Q(i) with ``q > 0`` and ``gcd(a, b, q) == 1``.

    Instances are immutable and always canonical, so ``==`` and ``hash`` are
    structural.
    """

    __slots__ = ("_a", "_b", "_q")

    def __init__(self, re: int | Fraction = 0, im: int | Fraction = 0) -> None:
        re = Fraction(re)
        im = Fraction(im)
        q = re.denominator * im.denominator // gcd(re.denominator, im.denominator)
        _set(self, re.numerator * (q // re.denominator), im.numerator * (q // im.denominator), q)

    @classmethod
    def _raw(cls, a: int, b: int, q: int) -> Scalar:
        obj = object.__new__(cls)
        _set(obj, a, b, q)
        return obj

    @property
    def re(self) -> Fraction:
        return Fraction(self._a, self._q)

    @property
    def im(self) -> Fraction:
        return Fraction(self._b, self._q)

    def is_zero(self) -> bool:
        return self._a == 0 and self._b == 0

    def is_real(self) -> bool:
        return self._b == 0

    def conj(self) -> Scalar:
        return Scalar._raw(self._a, -self._b, self._q)

    def norm(self) -> Fraction:
        return Fraction(self._a * self._a + self._b * self._b, self._q * self._q)

    # arithmetic -------------------------------------------------------

    def __add__(self, other: Number) -> Scalar:
        o = as_scalar(other)
        q1, q2 = self._q, o._q
        return Scalar._raw(self._a * q2 + o._a * q1, self._b * q2 + o._b * q1, q1 * q2)

    __radd__ = __add__

    def __sub__(self, other: Number) -> Scalar:
        o = as_scalar(other)
        q1, q2 = self._q, o._q
        return Scalar._raw(self._a * q2 - o._a * q1, self._b * q2 - o._b * q1, q1 * q2)

    def __rsub__(self, other: Number) -> Scalar:
        return as_scalar(other) - self

    def __mul__(self, other: Number) -> Scalar:
        if isinstance(other, int):
            return Scalar._raw(self._a * other, self._b * other, self._q)
        o = as_scalar(other)
        a1, b1, a2, b2 = self._a, self._b, o._a, o._b
        return Scalar._raw(a1 * a2 - b1 * b2, a1 * b2 + a2 * b1, self._q * o._q)

    __rmul__ = __mul__

    def inv(self) -> Scalar:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(i)")
        a, b, q = self._a, self._b, self._q
        return Scalar._raw(a * q, -b * q, a * a + b * b)

    def __truediv__(self, other: Number) -> Scalar:
        return self * as_scalar(other).inv()

    def __rtruediv__(self, other: Number) -> Scalar:
        return as_scalar(other) * self.inv()

    def __neg__(self) -> Scalar:
        return Scalar._raw(-self._a, -self._b, self._q)

    def __pos__(self) -> Scalar:
        return self

    def __pow__(self, k: int) -> Scalar:
        if k < 0:
            return self.inv() ** (-k)
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # comparison -------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Scalar):
            return self._a == other._a and self._b == other._b and self._q == other._q
        if isinstance(other, (int, Fraction)):
            return self._b == 0 and Fraction(self._a, self._q) == other
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._b == 0:
            return hash(Fraction(self._a, self._q))
        return hash((self._a, self._b, self._q))

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __complex__(self) -> complex:
        return complex(self._a / self._q, self._b / self._q)

    def __repr__(self) -> str:
        return f"Scalar({format_scalar(self)})"

    def __str__(self) -> str:
        return format_scalar(self)


def _set(obj: Scalar, a: int, b: int, q: int) -> None:
    if q <= 0:
        if q == 0:
            raise ZeroDivisionError("zero denominator")
        a, b, q = -a, -b, -q
    if a == 0 and b == 0:
        q = 1
    else:
        g = gcd(a, b, q)
        if g != 1:
            a, b, q = a // g, b // g, q // g
    object.__setattr__(obj, "_a", a)
    object.__setattr__(obj, "_b", b)
    object.__setattr__(obj, "_q", q)


def _frozen_setattr(self, name, value):
    raise AttributeError("Scalar is immutable")


Scalar.__setattr__ = _frozen_setattr  # type: ignore[assignment]

ZERO = Scalar._raw(0, 0, 1)
ONE = Scalar._raw(1, 0, 1)
I = Scalar._raw(0, 1, 1)


def as_scalar(x: Number) -> Scalar:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, int):
        return Scalar._raw(x, 0, 1)
    if isinstance(x, Fraction):
        return Scalar._raw(x.numerator, 0, x.denominator)
    raise TypeError(f"cannot interpret {x!r} as an element of Q(i)")


def _format_rational(r: Fraction) -> str:
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


def format_scalar(z: Scalar) -> str:
    """Canonical text form: ``a/b``, ``a/b*i`` or ``a/b+c/d*i`` (``i`` and ``-i`` for unit parts)."""
    re, im = z.re, z.im
    if im == 0:
        return _format_rational(re)
    if im == 1:
        imag = "i"
    elif im == -1:
        imag = "-i"
    else:
        imag = f"{_format_rational(im)}*i"
    if re == 0:
        return imag
    sep = "" if imag.startswith("-") else "+"
    return f"{_format_rational(re)}{sep}{imag}"


class CirclePoint:
    """A point ``(c, s)`` with ``c**2 + s**2 == 1`` exactly; stands in for ``(cos(pi t), sin(pi t))``."""

    __slots__ = ("c", "s")

    def __init__(self, c: Fraction, s: Fraction) -> None:
        c, s = Fraction(c), Fraction(s)
        if c * c + s * s != 1:
            raise ValueError(f"({c}, {s}) is not on the unit circle")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "s", s)

    def __setattr__(self, name, value):
        raise AttributeError("CirclePoint is immutable")

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CirclePoint) and (self.c, self.s) == (other.c, other.s)

    def __hash__(self) -> int:
        return hash((self.c, self.s))

    def __repr__(self) -> str:
        return f"CirclePoint(c={self.c}, s={self.s})"

    def unit(self) -> Scalar:
        """``exp(pi i t) = c + s*i``."""
        return Scalar(self.c, self.s)


INFINITY = "infinity"


def circle_point(s_half: Fraction | int | str) -> CirclePoint:
    """Rational point from the half-angle parameter ``s_half = tan(pi t / 2)``.

    ``0`` gives ``t = 0``, ``1`` gives ``t = 1/2`` and ``"infinity"`` gives ``t = 1``.
    """
    if isinstance(s_half, str):
        if s_half.strip().lower() not in ("inf", "infinity", "oo"):
            return circle_point(Fraction(s_half.strip()))
        return CirclePoint(Fraction(-1), Fraction(0))
    u = Fraction(s_half)
    den = 1 + u * u
    return CirclePoint((1 - u * u) / den, 2 * u / den)
