"""``gcx`` command-line front end.

Exit status: 0 ok, 2 parse error, 3 validation failure, 4 usage/selection error,
1 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from .cohomology import (
    DeRham,
    bc_injective,
    complex_verdicts,
    ddbar_lemma,
    derham,
    hpq,
    hpq_table,
    pq_subspace,
    symplectic_suite,
    verdict_gen,
)
from .errors import GcxError, InternalError, ParseError, ValidationError
from .exterior import Form, exp_form, mukai
from .gcs import GenStructure, beta_transform, from_spinor, gtype, integrable
from .grading import build_grading, split_d
from .manifest import Built, Manifest, UsageError, build, load_manifest
from .scalars import CirclePoint, circle_point, format_scalar
from .structlang import parse_bivector, parse_form, print_form, print_salamon
from .subspace import Matrix, Subspace, rank

EXIT = {"ok": 0, "internal": 1, "parse": 2, "validation": 3, "usage": 4}


# ---------------------------------------------------------------------------
# helpers

def _form(f: Form, dim: int) -> str:
    return print_form(f, dim)


def _kdict(d: dict) -> dict:
    return {str(k): v for k, v in d.items()}


def _pq(d: dict) -> dict:
    return {f"{p},{q}": v for (p, q), v in d.items()}


def _verdict_json(v, dim: int) -> dict:
    out = {"pure": v.pure, "full": v.full, "pure_and_full": v.pure_and_full}
    if "not_pure" in v.witnesses:
        key, f = v.witnesses["not_pure"]
        out["witness_not_pure"] = {"index": str(key), "class": _form(f, dim)}
    if "not_full" in v.witnesses:
        out["witness_not_full"] = _form(v.witnesses["not_full"], dim)
    return out


def _representatives(candidates: Subspace, dr: DeRham, total=None) -> list[Form]:
    """Elements of ``candidates`` (cocycles) whose classes are a basis of their image."""
    h = total or dr.total
    chosen, acc = [], Subspace.zero(h.dim)
    for v in candidates.basis:
        img = Subspace.span(h.dim, [h.project_vec(v)])
        if not acc.contains_subspace(img):
            acc = acc.sum(img)
            chosen.append(Form(v))
    return chosen


def _parse_circle(text: str | None) -> tuple[str, CirclePoint] | None:
    if text is None:
        return None
    key, sep, value = text.partition("=")
    if sep != "=" or key.strip() != "s":
        raise UsageError(f"--circle expects s=p/q or s=inf, got {text!r}")
    try:
        return value.strip(), circle_point(value.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad circle parameter {value!r}: {exc}") from exc


def _algebra_json(m: Manifest, dr: DeRham | None = None) -> dict:
    out = {"dim": m.algebra.dim, "salamon": print_salamon(m.algebra) if m.algebra.dim <= 9 else None}
    if dr is not None:
        out["betti"] = list(dr.betti)
    return out


# ---------------------------------------------------------------------------
# per-structure reports

def structure_summary(g: GenStructure) -> dict:
    integ = integrable(g)
    out = {"type": gtype(g), "integrable": integ.integrable}
    if not integ.integrable:
        a, b = integ.witness
        out["nijenhuis_witness"] = {"pair": [a, b], "value": [format_scalar(c) for c in integ.value.coords()]}
    gr = build_grading(g)
    spectral = split_d(gr).integrable
    if spectral != integ.integrable:
        raise InternalError("Nijenhuis tensor and graded splitting of d disagree on integrability")
    out["u_dims"] = _kdict(gr.dims())
    return out


def decompose_report(g: GenStructure, dr: DeRham, reps: bool = False) -> dict:
    dim = g.dim
    out = structure_summary(g)
    gr = build_grading(g)
    v = verdict_gen(gr, dr)
    out["gh_dims"] = _kdict(v.dims)
    out["gh_total"] = dr.total.dim
    out.update(_verdict_json(v, dim))
    if v.extra.get("integrable"):
        out["bc_dims"] = _kdict(v.extra["bc_dims"])
        out["bc_surjective"] = v.extra["bc_surjective"]
        out["ddbar_lemma"] = ddbar_lemma(gr)
        out["bc_injective"] = bc_injective(gr, dr)
    if reps:
        z = dr.total.cocycles
        out["representatives"] = {
            str(k): [_form(f, dim) for f in _representatives(z.intersect(gr.piece(k)), dr)]
            for k in range(gr.n, -gr.n - 1, -1)
        }
    return out


def complex_report(b: Built, dr: DeRham, reps: bool = False) -> dict:
    if b.j_cov is None:
        raise UsageError(f"structure {b.spec.name!r} is not an almost-complex structure")
    j, dim = b.j_cov, b.gen.dim
    out = {"integrable": integrable(b.gen).integrable, "hpq": _pq(hpq_table(j, dr))}
    out["stages"] = {str(k): _verdict_json(v, dim) for k, v in complex_verdicts(j, dr).items()}
    out["pure_and_full_every_stage"] = all(s["pure_and_full"] for s in out["stages"].values())
    if reps:
        n = dim // 2
        out["representatives"] = {}
        for p in range(n + 1):
            for q in range(n + 1):
                h = dr.degrees[p + q]
                cand = h.cocycles.intersect(pq_subspace(j, p, q))
                forms = _representatives(cand, dr, h)
                if forms:
                    out["representatives"][f"{p},{q}"] = [_form(f, dim) for f in forms]
    return out


def symplectic_report(b: Built, dr: DeRham) -> dict:
    if b.omega is None:
        raise UsageError(f"structure {b.spec.name!r} is not symplectic")
    r = symplectic_suite(b.omega, b.gen.algebra, dr)
    gr = build_grading(b.gen)
    gen = verdict_gen(gr, dr)
    out = {
        "hlc": _kdict(r.hlc),
        "hlc_all": r.hlc_all,
        "brylinski_surjective": _kdict(r.brylinski_surjective),
        "brylinski_all": r.brylinski_all,
        "dd_lambda_lemma": r.dd_lambda_lemma,
        "sh_bc_dims": _kdict(r.sh_bc_dims),
        "ph_bc_dims": _kdict(r.ph_bc_dims),
        "sh_rs_dims": _pq(r.sh_rs_dims),
        "h_rs_omega_dims": _pq(r.h_rs_omega_dims),
        "brylinski_pure_and_full": r.brylinski_pure_and_full,
        "lefschetz_at_pure_and_full": all(v.pure_and_full for v in r.at_decomposition.values()),
        "equivalence_consistent": r.equivalence_consistent,
        "sl2": r.sl2,
        "generalized_pure_and_full": gen.pure_and_full,
        "generalized_ddbar_lemma": ddbar_lemma(gr),
    }
    out["pure_and_full_agreement"] = out["generalized_pure_and_full"] == r.brylinski_pure_and_full
    out["lemma_agreement"] = out["generalized_ddbar_lemma"] == r.dd_lambda_lemma
    if not (out["equivalence_consistent"] and out["pure_and_full_agreement"] and out["lemma_agreement"]):
        raise InternalError("symplectic equivalences disagree: " + json.dumps(out, sort_keys=True))
    return out


# ---------------------------------------------------------------------------
# commands

def cmd_validate(args, m: Manifest) -> tuple[dict, int]:
    results = []
    for spec in m.structures.values():
        entry = {"name": spec.name, "kind": spec.kind}
        samples = ["0", "1"] if spec.family else [None]
        try:
            built = [build(m, spec, circle_point(s) if s else None) for s in samples]
            for bt in built:
                bt.gen.check()
        except ValidationError as exc:
            raise type(exc)(f"structure {spec.name!r}: {exc}") from exc
        if spec.family:
            entry["checked_at"] = [f"s={s}" for s in samples]
        entry["type"] = [gtype(bt.gen) for bt in built] if spec.family else gtype(built[0].gen)
        entry["valid"] = True
        results.append(entry)
    return {"structures": results, "jacobi": True}, EXIT["ok"]


def _check_reps(path: str, dr: DeRham) -> dict:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise ParseError(f"representatives file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"representatives file is not valid JSON: {exc}") from exc
    dim = dr.algebra.dim
    out = {}
    for key, texts in sorted(data.items(), key=lambda kv: int(kv[0])):
        k = int(key)
        forms = [parse_form(t, dim) for t in texts]
        bad_degree = [t for t, f in zip(texts, forms) if f.degrees() - {k}]
        not_closed = [t for t, f in zip(texts, forms) if not dr.closed(f)]
        basis = not bad_degree and not not_closed and dr.is_basis(forms, k)
        out[key] = {"closed": not not_closed, "basis": bool(basis), "not_closed": not_closed, "wrong_degree": bad_degree}
    return out


def cmd_derham(args, m: Manifest) -> tuple[dict, int]:
    dr = derham(m.algebra)
    dim = m.algebra.dim
    out = {"betti": list(dr.betti), "total": dr.total.dim}
    out["representatives"] = {str(k): [_form(Form(r), dim) for r in h.rep_basis] for k, h in enumerate(dr.degrees)}
    code = EXIT["ok"]
    if args.check_representatives:
        chk = _check_reps(args.check_representatives, dr)
        out["check"] = chk
        if not all(c["basis"] for c in chk.values()):
            code = EXIT["validation"]
    return out, code


def _selected(args, m: Manifest) -> tuple[Built, dict]:
    spec = m.spec(args.structure)
    circ = _parse_circle(args.circle)
    b = build(m, spec, circ[1] if circ else None)
    head = {"structure": spec.name, "kind": spec.kind}
    if circ:
        head["circle"] = {"s": circ[0], "cos": str(circ[1].c), "sin": str(circ[1].s)}
    return b, head


def cmd_decompose(args, m: Manifest) -> tuple[dict, int]:
    b, head = _selected(args, m)
    dr = derham(m.algebra)
    head.update(decompose_report(b.gen, dr, args.reps))
    return head, EXIT["ok"]


def cmd_complex(args, m: Manifest) -> tuple[dict, int]:
    b, head = _selected(args, m)
    head.update(complex_report(b, derham(m.algebra), args.reps))
    return head, EXIT["ok"]


def cmd_symplectic(args, m: Manifest) -> tuple[dict, int]:
    b, head = _selected(args, m)
    head.update(symplectic_report(b, derham(m.algebra)))
    return head, EXIT["ok"]


def cmd_transform(args, m: Manifest) -> tuple[dict, int]:
    b, head = _selected(args, m)
    dim = m.algebra.dim
    rho = b.gen.canonical_generator()
    steps = []
    for kind, text in args.ops or []:
        if kind == "B":
            bf = parse_form(text, m.algebra)
            if bf.degrees() - {2}:
                raise ValidationError(f"B-field {text!r} is not a 2-form")
            if not m.algebra.d(bf).is_zero():
                raise ValidationError(f"B-field {text!r} is not closed")

            rho = exp_form(bf) ^ rho if not bf.is_zero() else rho
        else:
            rho = beta_transform(rho, parse_bivector(text, m.algebra))
        steps.append({"op": kind, "expr": text})
    head["steps"] = steps
    head["spinor"] = _form(rho, dim)
    if args.compare is not None:
        head["equals_compare"] = rho == parse_form(args.compare, m.algebra)
    code = EXIT["ok"]
    if args.report == "decompose":
        try:
            g = from_spinor(rho, m.algebra, b.spec.name)
        except ValidationError as exc:
            head["valid"] = False
            head["error"] = str(exc)
            return head, EXIT["validation"]
        head["valid"] = True
        head.update(decompose_report(g, derham(m.algebra), args.reps))
    return head, code


def _sweep_row(payload) -> dict:
    source, name, s, reps = payload
    m = load_manifest(source)
    spec = m.spec(name)
    cp = circle_point(s)
    b = build(m, spec, cp)
    dr = derham(m.algebra)
    row = {"s": s, "cos": str(cp.c), "sin": str(cp.s)}
    row.update(decompose_report(b.gen, dr, reps))
    if b.j_cov is not None:
        row["h10"] = hpq(b.j_cov, dr, 1, 0).dim
        row["h01"] = hpq(b.j_cov, dr, 0, 1).dim
        row["complex_stage1_full"] = complex_verdicts(b.j_cov, dr)[1].full
    return row


def _frange(text: str) -> list[str]:
    try:
        a, b, step = (Fraction(x) for x in text.split(":"))
    except ValueError as exc:
        raise UsageError(f"--range expects start:stop:step, got {text!r}") from exc
    if step <= 0:
        raise UsageError("--range step must be positive")
    out, x = [], a
    while x <= b:
        out.append(str(x))
        x += step
    return out


def cmd_sweep(args, m: Manifest) -> tuple[dict, int]:
    spec = m.spec(args.structure)
    if not spec.family:
        raise UsageError(f"structure {spec.name!r} is not a family")
    samples: list[str] = []
    if args.circle_list:
        samples += [s.strip() for s in args.circle_list.split(",") if s.strip()]
    if args.range:
        samples += _frange(args.range)
    if not samples:
        raise UsageError("empty sample set: pass --circle-list or --range")
    for s in samples:
        _parse_circle(f"s={s}")
    source = str(Path(args.input).resolve())
    payloads = [(source, spec.name, s, args.reps) for s in samples]
    if args.jobs and args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_row, payloads))
    else:
        rows = [_sweep_row(p) for p in payloads]
    return {"structure": spec.name, "kind": spec.kind, "rows": rows}, EXIT["ok"]


def cmd_mukai(args, m: Manifest) -> tuple[dict, int]:
    dr = derham(m.algebra)
    dim = m.algebra.dim
    out: dict = {}
    if args.structure:
        b, head = _selected(args, m)
        out.update(head)
        gr = build_grading(b.gen)
        basis, labels = [], []
        for k in range(gr.n, -gr.n - 1, -1):
            for f in _representatives(dr.total.cocycles.intersect(gr.piece(k)), dr):
                basis.append(f)
                labels.append(k)
        if len(basis) == dr.total.dim and rank_of(basis, dr) == dr.total.dim:
            out["basis_grading"] = labels
            gram = [[mukai(a, c, dim) for c in basis] for a in basis]
            out["graded_vanishing"] = all(
                gram[i][j].is_zero() for i in range(len(basis)) for j in range(len(basis)) if labels[i] + labels[j]
            )
        else:
            out["graded_basis"] = False
            gram = None
    else:
        gram = None
    if gram is None:
        basis = [Form(r) for r in dr.total.rep_basis]
        gram = [[mukai(a, c, dim) for c in basis] for a in basis]

    out["basis"] = [_form(f, dim) for f in basis]
    out["gram"] = [[format_scalar(x) for x in row] for row in gram]
    out["rank"] = rank(Matrix.from_rows(gram))
    out["dim"] = dr.total.dim
    return out, EXIT["ok"]


def rank_of(forms, dr: DeRham) -> int:
    return dr.classes(forms).dim


COMMANDS = {
    "validate": cmd_validate,
    "derham": cmd_derham,
    "decompose": cmd_decompose,
    "complex": cmd_complex,
    "symplectic": cmd_symplectic,
    "transform": cmd_transform,
    "sweep": cmd_sweep,
    "mukai": cmd_mukai,
}


# ---------------------------------------------------------------------------
# argument parsing and rendering

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT["usage"], f"{self.prog}: error: {message}\n")


class _OrderedOp(argparse.Action):
    """Collect ``--B`` / ``--beta`` in command-line order."""

    def __call__(self, parser, namespace, values, option_string=None):
        ops = list(getattr(namespace, "ops", None) or [])
        ops.append(("B" if option_string == "--B" else "beta", values))
        namespace.ops = ops


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gcx", description="Cohomological decompositions for generalized-complex structures on nilpotent Lie algebras.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--input", "-i", required=True, help="manifest JSON")
        sp.add_argument("--format", choices=("json", "table"), default="table")
        if name not in ("validate", "derham"):
            sp.add_argument("--structure", "-s", required=name not in ("mukai",))
        if name in ("decompose", "complex", "symplectic", "transform", "mukai"):
            sp.add_argument("--circle", help="circle point s=p/q (or s=inf) for family structures")
        if name in ("decompose", "complex", "transform", "sweep"):
            sp.add_argument("--reps", action="store_true", help="list representatives")
        if name == "derham":
            sp.add_argument("--check-representatives", metavar="REPS_JSON")
        if name == "transform":
            sp.add_argument("--B", action=_OrderedOp, dest="ops", metavar="FORM")
            sp.add_argument("--beta", action=_OrderedOp, dest="ops", metavar="BIVECTOR")
            sp.add_argument("--compare", metavar="FORM")
            sp.add_argument("--report", choices=("decompose", "none"), default="decompose")
        if name == "sweep":
            sp.add_argument("--circle-list", help="comma-separated s values")
            sp.add_argument("--range", help="start:stop:step over s")
            sp.add_argument("--jobs", type=int, default=1)
    return p


def render_table(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        width = max((len(str(k)) for k in obj), default=0)
        for k in sorted(obj, key=str):
            v = obj[k]
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines += render_table(v, indent + 1)
            else:
                lines.append(f"{pad}{str(k).ljust(width)}  {_cell(v)}")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            scalars_only = isinstance(v, dict) and all(not isinstance(x, (dict, list)) for x in v.values())
            if isinstance(v, (dict, list)) and not (_flat(v) or scalars_only):
                lines.append(f"{pad}[{i}]")
                lines += render_table(v, indent + 1)
            else:
                lines.append(f"{pad}[{i}]  {_cell(v)}")
    else:
        lines.append(pad + _cell(obj))
    return lines


def _flat(v) -> bool:
    if isinstance(v, list):
        return all(not isinstance(x, (dict, list)) for x in v)
    if isinstance(v, dict):
        return all(not isinstance(x, (dict, list)) for x in v.values()) and len(v) <= 8 and all(
            len(str(x)) < 12 for x in v.values()
        )
    return True


def _cell(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, list):
        sep = " | " if any(" " in str(x) for x in v) else " "
        return sep.join(_cell(x) for x in v)
    if isinstance(v, dict):
        return "  ".join(f"{k}:{_cell(x)}" for k, x in sorted(v.items(), key=lambda kv: str(kv[0])))
    if v is None:
        return "-"
    return str(v)


def emit(report: dict, fmt: str, stream) -> None:
    if fmt == "json":
        stream.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    else:
        stream.write("\n".join(render_table(report)) + "\n")


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = make_parser().parse_args(argv)
    except SystemExit as exc:  # argparse already printed its message
        return exc.code if isinstance(exc.code, int) else EXIT["usage"]
    fmt = getattr(args, "format", "table")
    report = {"schema": 1, "command": args.command}
    try:
        m = load_manifest(args.input)
        dr_alg = _algebra_json(m)
        report["algebra"] = dr_alg
        result, code = COMMANDS[args.command](args, m)
        report["result"] = result
        report["status"] = "ok" if code == 0 else "failed"
    except ParseError as exc:
        report.update(status="parse-error", error=str(exc))
        code = EXIT["parse"]
    except UsageError as exc:
        report.update(status="usage-error", error=str(exc))
        code = EXIT["usage"]
    except ValidationError as exc:
        report.update(status="validation-error", error=f"{type(exc).__name__}: {exc}")
        code = EXIT["validation"]
    except (InternalError, GcxError) as exc:
        report.update(status="internal-error", error=str(exc))
        code = EXIT["internal"]
    report["exit"] = code
    emit(report, fmt, stdout)
    if code:
        stderr.write(f"gcx: {report.get('error', report['status'])}\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
