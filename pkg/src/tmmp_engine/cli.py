"""Command-line front end: ``tmmp-engine <command> <input.json> [options]``."""
from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import exactmath as em
from .cohomology import box_elements, build_fan, quantum_dim
from .errors import NonRationalValue, SchemaError, TmmpError
from .numeric import estimate_valuations, verification_json, verify_against_tropical
from .polytope import solve_polytope
from .potential import build_potential, kouchnirenko_count
from .presentation import Presentation, ResidualData, deform_support, moment_polytope, residual, validate
from .relations import (
    primitive_collections,
    qsr_relation,
    relation_json,
    render_relation,
    substitution_identity,
    suggested_degrees,
)
from .svg import emit_svg
from .tmmp import check_ledger, report_json, run_tmmp

RATIONAL = re.compile(r"^-?\d+(/\d+)?$")
COMMANDS = ("validate", "analyze", "relations", "tmmp", "crit", "verify")


def parse_rational(value: Any, where: str) -> Fraction:
    if isinstance(value, bool):
        raise SchemaError(f"{where}: expected a rational, got a boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise NonRationalValue(f"{where}: {value!r} is a float; write exact rationals as \"p/q\" strings")
    if isinstance(value, str):
        if not RATIONAL.match(value.strip()):
            raise NonRationalValue(f"{where}: {value!r} is not of the form \"p\" or \"p/q\"")
        num, _, den = value.strip().partition("/")
        if den and int(den) == 0:
            raise NonRationalValue(f"{where}: zero denominator")
        return Fraction(int(num), int(den) if den else 1)
    raise SchemaError(f"{where}: expected a rational, got {type(value).__name__}")


def _rational_list(value: Any, where: str) -> list[Fraction]:
    if not isinstance(value, list):
        raise SchemaError(f"{where}: expected a list")
    return [parse_rational(x, f"{where}[{i}]") for i, x in enumerate(value)]


def presentation_from_document(doc: Any) -> tuple[Presentation, list[Fraction] | None]:
    if not isinstance(doc, dict):
        raise SchemaError("top level: expected an object")
    for key in ("weights", "support"):
        if key not in doc:
            raise SchemaError(f"missing field {key!r}")
    weights = doc["weights"]
    if not isinstance(weights, list) or not weights or not all(isinstance(r, list) for r in weights):
        raise SchemaError("weights: expected a non-empty list of rows")
    for i, row in enumerate(weights):
        for j, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, int):
                raise SchemaError(f"weights[{i}][{j}]: expected an integer")
    k = len(weights[0])
    if any(len(r) != k for r in weights):
        raise SchemaError("weights: rows have different lengths")
    if "dim_g" in doc and doc["dim_g"] != len(weights):
        raise SchemaError(f"dim_g: {doc['dim_g']} does not match {len(weights)} weight rows")
    support = _rational_list(doc["support"], "support")
    if len(support) != k:
        raise SchemaError(f"support: {len(support)} entries, expected {k}")
    labels = doc.get("labels") or []
    if not isinstance(labels, list) or (labels and len(labels) != k) or not all(isinstance(s, str) for s in labels):
        raise SchemaError(f"labels: expected {k} strings")
    deform = _rational_list(doc["deform"], "deform") if doc.get("deform") is not None else None
    if deform is not None and len(deform) != k:
        raise SchemaError(f"deform: {len(deform)} entries, expected {k}")
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise SchemaError("name: expected a string")
    return Presentation(tuple(tuple(r) for r in weights), tuple(support), tuple(labels), name), deform


def _load_json(path) -> Any:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def parse_input(path) -> Presentation:
    """Read an input document; an embedded ``deform`` vector replaces the support."""
    p, deform = presentation_from_document(_load_json(path))
    return deform_support(p, deform) if deform is not None else p


def presentation_document(p: Presentation) -> dict:
    return {
        "name": p.name,
        "dim_g": p.r,
        "weights": [list(r) for r in p.weights],
        "support": [em.fmt_rat(x) for x in p.support],
        "labels": list(p.labels),
    }


# --- commands ----------------------------------------------------------------

def _pt(p) -> list[str]:
    return [em.fmt_rat(x) for x in p]


def cmd_validate(p: Presentation, res: ResidualData, args) -> tuple[dict, list[str]]:
    rep = validate(p)
    data = {
        "valid": True,
        "n": rep.n,
        "torsion": list(rep.torsion),
        "half_space_witness": _pt(rep.half_space_witness),
        "spans": rep.spans,
        "vertex_count": rep.vertex_count,
        "simple": rep.simple,
        "spurious": list(rep.spurious),
        "nu": [list(r) for r in res.nu],
    }
    text = [f"valid presentation: n = {rep.n}, torsion = {list(rep.torsion)}",
            f"half-space witness: ({', '.join(_pt(rep.half_space_witness))})",
            f"vertices: {rep.vertex_count}, all simple: {rep.simple}, spurious: {list(rep.spurious)}"]
    return data, text


def cmd_analyze(p: Presentation, res: ResidualData, args) -> tuple[dict, list[str]]:
    poly = moment_polytope(p, res)
    qdim = quantum_dim(poly, res.torsion)
    kc = kouchnirenko_count(build_potential(res, p.support), res.torsion)
    data: dict = {"n": res.n, "torsion": list(res.torsion), "nu": [list(r) for r in res.nu]}
    if res.n:
        comb = solve_polytope(poly)
        fan = build_fan(poly, comb)
        data["vertices"] = [{"point": _pt(v.point), "active": sorted(v.active)} for v in comb.vertices]
        data["facets"] = sorted(comb.facet_indices)
        data["spurious"] = sorted(comb.spurious_indices)
        data["box_counts"] = [len(b) for b in box_elements(fan)]
    data["quantum_dim"] = qdim
    data["kouchnirenko"] = kc
    data["semi_fano"] = kc == qdim
    text = [f"n = {res.n}, torsion = {list(res.torsion)}"]
    if res.n:
        text.append(f"vertices: {len(data['vertices'])}, facets: {data['facets']}, spurious: {data['spurious']}")
        text.append(f"box counts per cone: {data['box_counts']}")
    text += [f"dim QH = {qdim}", f"Kouchnirenko = {kc}", f"semi-Fano = {str(kc == qdim).lower()}"]
    return data, text


def cmd_relations(p: Presentation, res: ResidualData, args) -> tuple[dict, list[str]]:
    if res.n == 0:
        raise TmmpError("relations need a positive-dimensional residual torus")
    fan = build_fan(moment_polytope(p, res))
    colls = primitive_collections(fan, p.k)
    rels = [qsr_relation(p, d) for d in suggested_degrees(fan, p)]
    data = {
        "primitive_collections": [sorted(c) for c in colls],
        "suggested_degrees_exhaustive": False,
        "relations": [dict(relation_json(r, p), substitution_identity=substitution_identity(r, p, res)) for r in rels],
    }
    text = ["primitive collections: " + ", ".join("{" + ",".join(str(i + 1) for i in sorted(c)) + "}" for c in colls),
            "suggested degrees (not claimed exhaustive):"]
    text += [f"  d = ({', '.join(_pt(r.d))}): {render_relation(r, p)}" for r in rels]
    return data, text


def _tmmp_text(report, indent: str = "") -> list[str]:
    lines = []
    for tr in report.transitions:
        lines.append(f"{indent}t = {em.fmt_rat(tr.time)}: {tr.kind} at ({', '.join(_pt(tr.point))}), jump {tr.jump}"
                     + (f", I+ = {list(tr.partition[0])}, I- = {list(tr.partition[1])}" if tr.partition else ""))
        if tr.base is not None:
            lines.append(f"{indent}  fiber indices {list(tr.fiber.indices)}, fiber dim {tr.fiber.dim}; base program:")
            lines += _tmmp_text(tr.base, indent + "    ")
    return lines


def cmd_tmmp(p: Presentation, res: ResidualData, args) -> tuple[dict, list[str]]:
    report = run_tmmp(p, res)
    chk = check_ledger(report)
    data = {"report": report_json(report), "ledger_ok": chk.ok, "ledger_total": chk.total,
            "initial_dim": chk.initial_dim}
    text = _tmmp_text(report)
    text.append(f"ledger {chk.total} = {chk.initial_dim}: {str(chk.ok).lower()}")
    if args.svg:
        paths = emit_svg(report, moment_polytope(p, res), args.svg, list(p.labels))
        data["svg"] = [str(x) for x in paths]
        text.append(f"wrote {len(paths)} SVG frames to {args.svg}")
    return data, text


def cmd_crit(p: Presentation, res: ResidualData, args) -> tuple[dict, list[str]]:
    report = run_tmmp(p, res)
    chk = check_ledger(report)
    data = {
        "eigen_valuations": [{"time": em.fmt_rat(t), "multiplicity": d} for t, d in report.eigen_valuations],
        "fibers": [{"point": _pt(f.point), "multiplicity": f.multiplicity, "label": f.label} for f in report.fibers],
        "ledger": {"ok": chk.ok, "initial_dim": chk.initial_dim, "total": chk.total,
                   "crit_plus_total": chk.crit_plus_total, "discrepancy": chk.discrepancy, "notes": list(chk.notes)},
    }
    text = [f"valuation {em.fmt_rat(t)} with multiplicity {d}" for t, d in report.eigen_valuations]
    text += [f"fiber over ({', '.join(_pt(f.point))}) x{f.multiplicity}: {f.label}" for f in report.fibers]
    text.append(f"ledger {chk.total} = {chk.initial_dim}, interior count {chk.crit_plus_total}: {str(chk.ok).lower()}")
    return data, text


def cmd_verify(p: Presentation, res: ResidualData, args) -> tuple[dict, list[str]]:
    q1 = parse_rational(args.q1, "--q1")
    q2 = parse_rational(args.q2, "--q2")
    w = build_potential(res, p.support)
    est = estimate_valuations(w, q1, q2)
    table = verify_against_tropical(est, run_tmmp(p, res), args.tol)
    data = {"numeric": verification_json(est, table)}
    text = [f"{len(est)} roots, {table.positive_count} Positive, {table.not_positive_count} NotPositive"]
    text += [f"  zeta = ({', '.join(f'{z:.4f}' for z in e.zeta)}): {e.classification}" for e in est]
    text += [f"predicted ({', '.join(_pt(r.point))}) x{r.multiplicity}: matched {r.matched}" for r in table.rows]
    text.append(f"mismatches: {table.mismatches}")
    return data, text


HANDLERS = {
    "validate": cmd_validate,
    "analyze": cmd_analyze,
    "relations": cmd_relations,
    "tmmp": cmd_tmmp,
    "crit": cmd_crit,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tmmp-engine", description=__doc__)
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("input", help="input JSON document")
    ap.add_argument("--json", metavar="PATH", help="also write a machine-readable report")
    ap.add_argument("--svg", metavar="DIR", help="write SVG frames (tmmp, surfaces only)")
    ap.add_argument("--q1", default="1/10000", help="larger q sample for verify (p/q)")
    ap.add_argument("--q2", default="1/100000", help="smaller q sample for verify (p/q)")
    ap.add_argument("--tol", type=float, default=0.05, help="valuation match tolerance")
    ap.add_argument("--deform", metavar="PATH", help="JSON file with replacement support constants")
    return ap


def _write_json(path, payload) -> None:
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        p = parse_input(args.input)
        if args.deform:
            doc = _load_json(args.deform)
            vec = doc.get("support", doc.get("deform")) if isinstance(doc, dict) else doc
            p = deform_support(p, _rational_list(vec, "deform"))
        res = residual(p)
        data, text = HANDLERS[args.command](p, res, args)
    except TmmpError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        if args.json:
            err = {"error": type(exc).__name__, "message": str(exc)}
            sugg = getattr(exc, "suggestion", None)
            if sugg is not None:
                err["suggestion"] = [em.fmt_rat(x) for x in sugg]
            _write_json(args.json, err)
        return 1
    print("\n".join(text))
    if args.json:
        _write_json(args.json, {"command": args.command, "input": presentation_document(p), "result": data})
    if args.command == "verify" and data["numeric"]["mismatches"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
