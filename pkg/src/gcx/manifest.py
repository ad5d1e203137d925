"""Manifest files: one algebra plus named structures, as JSON.

```
{"algebra": {"dim": 6, "salamon": "0,0,0,0,13+42,14+23"},
 "structures": [{"name": "J0", "kind": "complex", "images": {"e1": "-e2", ...}},
                {"name": "omega", "kind": "symplectic", "form": "e16+e25+e34"},
                {"name": "Jt", "kind": "complex-family", "matrix": [[0, 1, ...], ...]}]}
```

A kind ending in ``-family`` may use the tokens ``cos`` and ``sin``; they are
bound to the coordinates of a rational circle point before anything is built.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import ParseError, ValidationError
from .exterior import Form, LieAlgebra
from .gcs import GenStructure, from_complex, from_matrix, from_spinor, from_symplectic
from .scalars import CirclePoint
from .structlang import parse_diff_list, parse_endo, parse_form, parse_salamon
from .subspace import Matrix

BASE_KINDS = ("complex", "symplectic", "matrix", "spinor")


class UsageError(Exception):
    """Bad selection or flag combination (exit status 4)."""


@dataclass(frozen=True)
class StructureSpec:
    name: str
    kind: str
    payload: dict

    @property
    def family(self) -> bool:
        return self.kind.endswith("-family")

    @property
    def base_kind(self) -> str:
        return self.kind[: -len("-family")] if self.family else self.kind


@dataclass(frozen=True)
class Built:
    """A structure instantiated at an optional circle point."""

    spec: StructureSpec
    gen: GenStructure
    j_cov: Matrix | None = None
    omega: Form | None = None


@dataclass(frozen=True)
class Manifest:
    algebra: LieAlgebra
    algebra_spec: dict
    structures: dict[str, StructureSpec]

    def spec(self, name: str | None) -> StructureSpec:
        if name is None:
            raise UsageError("--structure is required")
        if name not in self.structures:
            raise UsageError(f"unknown structure {name!r}; available: {', '.join(self.structures)}")
        return self.structures[name]


def parse_algebra(spec: dict) -> LieAlgebra:
    if not isinstance(spec, dict) or "dim" not in spec:
        raise ParseError("algebra needs a 'dim' field")
    dim = spec["dim"]
    if not isinstance(dim, int) or dim <= 0 or dim % 2:
        raise ValidationError(f"algebra dimension must be a positive even integer, got {dim!r}")
    if "salamon" in spec:
        alg = parse_salamon(spec["salamon"])
        if alg.dim != dim:
            raise ValidationError(f"salamon string has {alg.dim} entries, dim is {dim}")
        return alg
    if "diff" in spec:
        return parse_diff_list(dim, spec["diff"])
    raise ParseError("algebra needs 'salamon' or 'diff'")


def load_manifest(source: str | Path | dict) -> Manifest:
    if isinstance(source, dict):
        data = source
    else:
        try:
            data = json.loads(Path(source).read_text(encoding="utf-8"))
        except FileNotFoundError as exc:
            raise ParseError(f"manifest not found: {source}") from exc
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise ParseError(f"manifest is not valid JSON: {exc}") from exc
    if not isinstance(data, dict) or "algebra" not in data:
        raise ParseError("manifest needs an 'algebra' object")
    algebra = parse_algebra(data["algebra"])
    structures: dict[str, StructureSpec] = {}
    for entry in data.get("structures", []):
        if not isinstance(entry, dict) or "name" not in entry or "kind" not in entry:
            raise ParseError("each structure needs 'name' and 'kind'")
        name, kind = entry["name"], entry["kind"]
        if name in structures:
            raise ParseError(f"duplicate structure name {name!r}")
        base = kind[: -len("-family")] if kind.endswith("-family") else kind
        if base not in BASE_KINDS:
            raise ParseError(f"unknown structure kind {kind!r}")
        payload = {k: v for k, v in entry.items() if k not in ("name", "kind")}
        structures[name] = StructureSpec(name, kind, payload)
    return Manifest(algebra, dict(data["algebra"]), structures)


def _field(spec: StructureSpec, *names: str):
    for n in names:
        if n in spec.payload:
            return n, spec.payload[n]
    raise ParseError(f"structure {spec.name!r} ({spec.kind}) needs one of: {', '.join(names)}")


def build(manifest: Manifest, spec: StructureSpec, circle: CirclePoint | None = None) -> Built:
    if spec.family and circle is None:
        raise UsageError(f"structure {spec.name!r} is a family; pass --circle s=p/q")
    if not spec.family and circle is not None:
        raise UsageError(f"structure {spec.name!r} is not a family; --circle does not apply")
    env = {"cos": circle.c, "sin": circle.s} if circle is not None else None
    alg = manifest.algebra
    kind = spec.base_kind
    if kind == "complex":
        key, value = _field(spec, "images", "matrix")
        j = parse_endo({key: value}, alg, env=env)
        return Built(spec, from_complex(j, alg, spec.name), j_cov=j)
    if kind == "symplectic":
        _, text = _field(spec, "form", "expr")
        omega = parse_form(str(text), alg, env)
        return Built(spec, from_symplectic(omega, alg, spec.name), omega=omega)
    if kind == "spinor":
        _, text = _field(spec, "expr", "form")
        return Built(spec, from_spinor(parse_form(str(text), alg, env), alg, spec.name))
    _, rows = _field(spec, "matrix")
    endo = parse_endo({"matrix": rows}, 2 * alg.dim, almost_complex=False, env=env)
    return Built(spec, from_matrix(endo, alg, spec.name))
