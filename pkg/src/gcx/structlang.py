"""Parsing and printing of structure equations, forms, bivectors and endomorphisms.

Form expressions::

    e1 + i*e2
    exp(i*(-e36 - e45)) ^ (e1 + i*e2)
    1/2*e[10,11]          (bracket syntax for indices above 9)
    conj(e1 + i*e2)

Products (``*``, ``^`` or juxtaposition) are all wedge products, numbers being
degree-0 forms.  Polyvectors use ``e_35`` in place of ``e35``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import (
    IndexRangeError,
    MalformedPairError,
    NotAlmostComplexError,
    ParseError,
    ValidationError,
)
from .exterior import Bivector, Form, LieAlgebra, exp_form, form_as_covector, indices_mask, mask_indices
from .scalars import I, ONE, Scalar, as_scalar, format_scalar
from .subspace import Matrix, Subspace

# ---------------------------------------------------------------------------
# tokenizer

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<mono>e(?P<vec>_)?(?:\[(?P<br>[\d,\s]*)\]|(?P<digits>\d+)))
  | (?P<num>\d+)
  | (?P<name>[A-Za-z][A-Za-z0-9]*)
  | (?P<op>[-+*/^()])
  """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    value: object
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unknown token at column {pos + 1}: {text[pos:pos + 10]!r}")
        if m.group("mono"):
            if m.group("br") is not None:
                parts = [p for p in re.split(r"[,\s]+", m.group("br").strip()) if p]
                idx = tuple(int(p) for p in parts)
            else:
                idx = tuple(int(ch) for ch in m.group("digits"))
            out.append(_Tok("vmono" if m.group("vec") else "mono", idx, pos))
        elif m.group("num"):
            out.append(_Tok("num", int(m.group("num")), pos))
        elif m.group("name"):
            out.append(_Tok("name", m.group("name"), pos))
        elif m.group("op"):
            out.append(_Tok("op", m.group("op"), pos))
        pos = m.end()
    out.append(_Tok("end", None, pos))
    return out


# ---------------------------------------------------------------------------
# AST

@dataclass(frozen=True)
class Num:
    value: Scalar


@dataclass(frozen=True)
class Mono:
    indices: tuple[int, ...]
    vector: bool = False


@dataclass(frozen=True)
class Sum:
    terms: tuple[object, ...]


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Wedge:
    left: object
    right: object


@dataclass(frozen=True)
class Div:
    left: object
    right: object


@dataclass(frozen=True)
class Exp:
    arg: object


@dataclass(frozen=True)
class Conj:
    arg: object


@dataclass(frozen=True)
class Const:
    name: str


class _Parser:
    _ATOM_START = ("num", "mono", "vmono", "name")

    def __init__(self, text: str) -> None:
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, op: str) -> None:
        t = self.take()
        if t.kind != "op" or t.value != op:
            raise ParseError(f"expected {op!r} at column {t.pos + 1} in {self.text!r}")

    def parse(self):
        if self.peek().kind == "end":
            raise ParseError("empty expression")
        node = self.expr()
        t = self.peek()
        if t.kind != "end":
            raise ParseError(f"unexpected {t.value!r} at column {t.pos + 1} in {self.text!r}")
        return node

    def expr(self):
        terms = [self.term()]
        while True:
            t = self.peek()
            if t.kind == "op" and t.value in "+-":
                self.take()
                rhs = self.term()
                terms.append(rhs if t.value == "+" else Neg(rhs))
            else:
                break
        return terms[0] if len(terms) == 1 else Sum(tuple(terms))

    def term(self):
        node = self.unary()
        while True:
            t = self.peek()
            if t.kind == "op" and t.value in "*^":
                self.take()
                node = Wedge(node, self.unary())
            elif t.kind == "op" and t.value == "/":
                self.take()
                node = Div(node, self.unary())
            elif t.kind in self._ATOM_START or (t.kind == "op" and t.value == "("):
                node = Wedge(node, self.unary())
            else:
                return node

    def unary(self):
        t = self.peek()
        if t.kind == "op" and t.value == "-":
            self.take()
            return Neg(self.unary())
        if t.kind == "op" and t.value == "+":
            self.take()
            return self.unary()
        return self.atom()

    def atom(self):
        t = self.take()
        if t.kind == "num":
            return Num(as_scalar(t.value))
        if t.kind in ("mono", "vmono"):
            return Mono(t.value, t.kind == "vmono")
        if t.kind == "name":
            nxt = self.peek()
            if t.value in ("exp", "conj") and nxt.kind == "op" and nxt.value == "(":
                self.take()
                arg = self.expr()
                self.expect(")")
                return Exp(arg) if t.value == "exp" else Conj(arg)
            if t.value == "i":
                return Num(I)
            return Const(t.value)
        if t.kind == "op" and t.value == "(":
            node = self.expr()
            self.expect(")")
            return node
        what = "end of input" if t.kind == "end" else repr(t.value)
        raise ParseError(f"unexpected {what} at column {t.pos + 1} in {self.text!r}")


def parse_ast(text: str):
    return _Parser(text).parse()


def evaluate(node, dim: int | None, env: Mapping[str, Scalar] | None = None, vector: bool = False) -> Form:
    """Evaluate an AST to a :class:`Form` (or a polyvector in the same encoding)."""
    env = env or {}

    def ev(n) -> Form:
        if isinstance(n, Num):
            return Form.scalar(n.value)
        if isinstance(n, Const):
            if n.name not in env:
                raise ParseError(f"unknown name {n.name!r}")
            return Form.scalar(env[n.name])
        if isinstance(n, Mono):
            if n.vector != vector:
                kind = "vector monomial e_..." if n.vector else "form monomial e..."
                raise ParseError(f"{kind} not allowed here")
            for k in n.indices:
                if k < 1 or (dim is not None and k > dim):
                    bound = f"dimension {dim}" if dim is not None else "range"
                    raise IndexRangeError(f"index {k} exceeds {bound}")
            return Form.monomial(*n.indices)
        if isinstance(n, Sum):
            out = Form()
            for t in n.terms:
                out = out + ev(t)
            return out
        if isinstance(n, Neg):
            return -ev(n.arg)
        if isinstance(n, Wedge):
            return ev(n.left) ^ ev(n.right)
        if isinstance(n, Div):
            den = ev(n.right)
            if den.degrees() - {0}:
                raise ParseError("can only divide by a scalar")
            c = den.coeff(0)
            if c.is_zero():
                raise ParseError("division by zero")
            return ev(n.left) / c
        if isinstance(n, Conj):
            return ev(n.arg).conj()
        if isinstance(n, Exp):
            arg = ev(n.arg)
            if 0 in arg.degrees():
                raise ParseError("exp argument has a degree-0 part")
            if any(k % 2 for k in arg.degrees()):
                raise ParseError("exp argument must have even degree")
            return exp_form(arg)
        raise TypeError(n)

    return ev(node)


def _dim_of(algebra: LieAlgebra | int | None) -> int | None:
    if algebra is None or isinstance(algebra, int):
        return algebra
    return algebra.dim


def parse_form(text: str, algebra: LieAlgebra | int | None = None, env: Mapping[str, Scalar] | None = None) -> Form:
    return evaluate(parse_ast(text), _dim_of(algebra), env)


def parse_polyvector(text: str, algebra: LieAlgebra | int | None = None, env: Mapping[str, Scalar] | None = None) -> Form:
    return evaluate(parse_ast(text), _dim_of(algebra), env, vector=True)


def parse_bivector(text: str, algebra: LieAlgebra | int | None = None, env: Mapping[str, Scalar] | None = None) -> Bivector:
    pv = parse_polyvector(text, algebra, env)
    if pv.degrees() - {2}:
        raise ParseError(f"{text!r} is not a bivector")
    return Bivector.from_polyvector(pv)


def parse_scalar(text: str, env: Mapping[str, Scalar] | None = None) -> Scalar:
    f = parse_form(text, None, env)
    if f.degrees() - {0}:
        raise ParseError(f"{text!r} is not a scalar")
    return f.coeff(0)


# ---------------------------------------------------------------------------
# printing

def _monomial_text(mask: int, dim: int | None, vector: bool) -> str:
    idx = [i + 1 for i in mask_indices(mask)]
    prefix = "e_" if vector else "e"
    if (dim is not None and dim > 9) or (idx and idx[-1] > 9):
        return f"{prefix}[{','.join(map(str, idx))}]"
    return prefix + "".join(map(str, idx))


def _term(c: Scalar, mono: str) -> tuple[bool, str]:
    """``(negative, body)``."""
    re_, im_ = c.re, c.im
    if im_ == 0:
        neg, mag = re_ < 0, abs(re_)
        body = format_scalar(as_scalar(mag))
        if mono:
            body = mono if mag == 1 else f"{body}*{mono}"
    elif re_ == 0:
        neg, mag = im_ < 0, abs(im_)
        body = "i" if mag == 1 else f"{format_scalar(as_scalar(mag))}*i"
        if mono:
            body = f"{body}*{mono}"
    else:
        neg = False
        body = f"({format_scalar(c)})"
        if mono:
            body = f"{body}*{mono}"
    return neg, body


def print_form(f: Form, dim: int | None = None, vector: bool = False) -> str:
    """Deterministic text (ascending bitmask order) that :func:`parse_form` reads back."""
    if f.is_zero():
        return "0"
    parts = []
    for k, (m, c) in enumerate(sorted(f.terms.items())):
        neg, body = _term(c, _monomial_text(m, dim, vector) if m else "")
        if k == 0:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f" - {body}" if neg else f" + {body}")
    return "".join(parts)


def print_bivector(b: Bivector, dim: int | None = None) -> str:
    f = Form({indices_mask((i - 1, j - 1))[1]: c for (i, j), c in b.terms.items()})
    return print_form(f, dim, vector=True)


# ---------------------------------------------------------------------------
# structure equations

_ENTRY = re.compile(r"^[+-]?\d{2}(?:[+-]\d{2})*$")


def parse_salamon(text: str) -> LieAlgebra:
    """Salamon shorthand, e.g. ``"0,0,0,0,13+42,14+23"``; entry ``i`` lists ``d e^i``."""
    body = text.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    entries = [e.replace(" ", "") for e in body.split(",")]
    dim = len(entries)
    if dim > 9:
        raise ParseError("shorthand is limited to dimension 9; use an explicit structure-constant list")
    diff1 = []
    for pos, entry in enumerate(entries, start=1):
        terms: dict[tuple[int, int], Fraction] = {}
        if entry == "0":
            diff1.append(terms)
            continue
        if not _ENTRY.match(entry):
            raise MalformedPairError(f"malformed entry {entry!r} for d e^{pos}")
        for sign, a, b in re.findall(r"([+-]?)(\d)(\d)", entry):
            j, k = int(a), int(b)
            for idx in (j, k):
                if idx < 1 or idx > dim:
                    raise IndexRangeError(f"index {idx} exceeds dimension {dim} (entry {entry!r} for d e^{pos})")
            if j == k:
                raise MalformedPairError(f"repeated index in pair {a}{b} for d e^{pos}")
            c = Fraction(-1 if sign == "-" else 1)
            if j > k:
                j, k, c = k, j, -c
            terms[(j, k)] = terms.get((j, k), Fraction(0)) + c
        diff1.append({jk: c for jk, c in terms.items() if c != 0})
    return LieAlgebra(dim, diff1)


def print_salamon(algebra: LieAlgebra) -> str:
    if algebra.dim > 9:
        raise ValueError("shorthand is limited to dimension 9")
    entries = []
    for entry in algebra.diff1():
        if not entry:
            entries.append("0")
            continue
        s = ""
        for (j, k), c in sorted(entry.items()):
            if c == 1:
                s += ("+" if s else "") + f"{j}{k}"
            elif c == -1:
                s += f"-{j}{k}"
            else:
                raise ValueError("shorthand only carries coefficients +-1")
        entries.append(s)
    return ",".join(entries)


def parse_diff_list(dim: int, diff: Sequence[Sequence[Sequence[object]]]) -> LieAlgebra:
    """Explicit structure constants: ``diff[i]`` is a list of ``[j, k, coeff]`` for ``d e^{i+1}``."""
    if len(diff) != dim:
        raise ParseError(f"diff list has {len(diff)} entries, expected {dim}")
    out = []
    for pos, entry in enumerate(diff, start=1):
        terms: dict[tuple[int, int], Fraction] = {}
        for item in entry:
            if len(item) != 3:
                raise MalformedPairError(f"entry {item!r} for d e^{pos} is not [j, k, coeff]")
            j, k, c = int(item[0]), int(item[1]), Fraction(str(item[2]))
            for idx in (j, k):
                if idx < 1 or idx > dim:
                    raise IndexRangeError(f"index {idx} exceeds dimension {dim}")
            if j == k:
                raise MalformedPairError(f"repeated index ({j}, {k}) for d e^{pos}")
            if j > k:
                j, k, c = k, j, -c
            terms[(j, k)] = terms.get((j, k), Fraction(0)) + c
        out.append(terms)
    return LieAlgebra(dim, out)


# ---------------------------------------------------------------------------
# endomorphisms

def _generator_index(key: str, dim: int) -> int:
    m = re.fullmatch(r"\s*e(?:\[(\d+)\]|(\d+))\s*", key)
    if not m:
        raise ParseError(f"image key {key!r} is not a generator e<i>")
    i = int(m.group(1) or m.group(2))
    if not 1 <= i <= dim:
        raise IndexRangeError(f"index {i} exceeds dimension {dim}")
    return i


def parse_endo(
    spec: Mapping[str, object] | Sequence[Sequence[object]],
    algebra: LieAlgebra | int,
    almost_complex: bool = True,
    env: Mapping[str, Scalar] | None = None,
) -> Matrix:
    """Endomorphism of the covectors as a ``dim x dim`` matrix (column ``j`` = image of ``e^{j+1}``).

    ``spec`` is ``{"images": {"e1": "-e2", ...}}``, ``{"matrix": rows}`` or the
    rows themselves.  Images may cover only half the generators: with
    ``almost_complex`` the rest follows from ``J^2 = -1``.  Matrix entries may
    be strings evaluated as scalars (with ``env`` supplying e.g. ``cos``).
    """
    dim = _dim_of(algebra)
    if isinstance(spec, Mapping) and "images" in spec:
        mat = _endo_from_images(spec["images"], dim, almost_complex, env)
    else:
        rows = spec["matrix"] if isinstance(spec, Mapping) else spec
        if len(rows) != dim or any(len(r) != dim for r in rows):
            raise ValidationError(f"endomorphism matrix must be {dim}x{dim}")
        mat = Matrix.from_rows([[_entry(x, env) for x in row] for row in rows])
    if almost_complex:
        check_almost_complex(mat)
    return mat


def check_almost_complex(mat: Matrix) -> None:
    if not mat.is_real():
        raise NotAlmostComplexError("endomorphism has non-real entries; not an almost-complex structure")
    if mat @ mat != Matrix.identity(mat.nrows, -1):
        raise NotAlmostComplexError("declared almost-complex but J^2 != -1")


def _entry(x: object, env: Mapping[str, Scalar] | None) -> Scalar:
    if isinstance(x, (int, Fraction, Scalar)):
        return as_scalar(x)
    if isinstance(x, float):
        raise ParseError("floating-point entries are not accepted; use exact fractions")
    return parse_scalar(str(x), env)


def _endo_from_images(images: Mapping[str, str], dim: int, complete: bool, env) -> Matrix:
    pairs: list[tuple[dict[int, Scalar], dict[int, Scalar]]] = []
    given = set()
    for key, expr in images.items():
        i = _generator_index(key, dim)
        if i in given:
            raise ParseError(f"duplicate image for e{i}")
        given.add(i)
        img = parse_form(str(expr), dim, env)
        if img.degrees() - {1}:
            raise ValidationError(f"image of e{i} is not a 1-form")
        y = {k: c for k, c in enumerate(form_as_covector(img, dim)) if not c.is_zero()}
        pairs.append(({i - 1: ONE}, y))
    if complete:
        pairs += [(y, {k: -c for k, c in x.items()}) for x, y in pairs]
    # choose an independent subset of sources, then J = Y X^{-1}
    span = Subspace.zero(dim)
    chosen = []
    for x, y in pairs:
        if not span.member(x):
            span = span.sum(Subspace.span(dim, [x]))
            chosen.append((x, y))
    if len(chosen) < dim:
        raise ValidationError("images do not determine the endomorphism on every generator")
    xm = Matrix(dim, dim, [x for x, _ in chosen])
    ym = Matrix(dim, dim, [y for _, y in chosen])
    mat = ym @ xm.inverse()
    for x, y in pairs:
        if mat.apply(x) != y:
            raise ValidationError("images are inconsistent with J^2 = -1" if complete else "inconsistent images")
    return mat


def print_endo(mat: Matrix) -> dict[str, str]:
    out = {}
    for j, col in enumerate(mat.cols):
        out[f"e{j + 1}"] = print_form(Form({1 << i: c for i, c in col.items()}), mat.nrows)
    return out
