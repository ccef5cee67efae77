"""Command-line front end: ``lct <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from .adapt import (
    Field,
    InternalAssertionError,
    LctError,
    Normalization,
    compute_lct,
)
from .bivar import BivarPoly, ParseError, parse
from .chains import accumulation_points, ascending_runs, batch_lct, lattice_L, read_batch_file
from .newton import newton_distance, polygon
from .probe import ACCEPTANCE_SEED, divergence_probe

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def rat(v) -> str:
    """Exact rational as text: ``"5/3"``, ``"2"`` or ``"inf"``."""
    if v is None:
        return None
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    return str(Fraction(v))


def _pt(p):
    return [p[0], p[1]]


def polygon_json(f: BivarPoly) -> dict:
    P = polygon(f)
    return {
        "vertices": [_pt(v) for v in P.vertices],
        "alpha": P.alpha,
        "beta": P.beta,
        "faces": [
            {
                "left": _pt(F.left),
                "right": _pt(F.right),
                "p_nu": F.p_nu,
                "q_nu": F.q_nu,
                "a": rat(F.a),
                "A": F.A,
                "B": F.B,
                "delta_inv": rat(F.delta_inv),
            }
            for F in P.faces
        ],
    }


def result_json(text: str, f: BivarPoly, res, trace: bool) -> dict:
    out = {
        "input": text,
        "field": res.field.value,
        "normalization": res.normalization.value,
        "c0": rat(res.c0),
        "delta_inv": rat(res.delta_inv_final),
        "order": res.order,
        "coordinate_change": {
            "axis": res.axis.value if res.axis else None,
            "terms": [[rat(t.coefficient), t.exponent] for t in res.coordinate_change],
        },
        "polygon": polygon_json(f),
    }
    if res.limit_multiplicity is not None:
        out["limit_multiplicity"] = res.limit_multiplicity
    if trace:
        out["trace"] = [
            {
                "polynomial": r.polynomial,
                "vertices": [_pt(v) for v in r.vertices],
                "main_face": r.main_face.value,
                "t_star": rat(r.t_star),
                "thick_root": None
                if r.thick_root is None
                else {
                    "b": rat(r.thick_root.b),
                    "multiplicity": r.thick_root.multiplicity,
                    "exponent": r.thick_root.exponent,
                },
                "transposed": r.transposed,
            }
            for r in res.trace
        ]
    return out


def _describe(res) -> str:
    kind = "integrability index" if res.normalization is Normalization.INDEX else "log-canonical threshold"
    return f"c0 = {rat(res.c0)} ({res.field.value} {kind})"


def _field(args) -> Field:
    return Field(args.field)


def _norm(args) -> Normalization:
    return Normalization.INDEX if args.normalization in ("paper", "index") else Normalization.LCT


def _emit(args, payload: dict, text: str):
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def cmd_compute(args) -> int:
    f = parse(args.expr)
    res = compute_lct(f, _field(args), _norm(args))
    lines = [_describe(res)]
    if args.trace:
        for i, r in enumerate(res.trace):
            tr = r.thick_root
            note = "adapted" if tr is None else f"thick root b={rat(tr.b)} m={tr.multiplicity} k={tr.exponent}"
            lines.append(f"  [{i}] t* = {rat(r.t_star)}  {r.main_face.value:<14} {note}  :: {r.polynomial}")
        if res.limit_multiplicity is not None:
            lines.append(f"  exact {res.limit_multiplicity}-fold root: t* -> {res.limit_multiplicity}")
    _emit(args, result_json(args.expr, f, res, args.trace), "\n".join(lines))
    return EXIT_OK


def cmd_polygon(args) -> int:
    f = parse(args.expr)
    if f.coefficient(0, 0) != 0:
        raise ValueError("f(0, 0) != 0: no Newton polygon at the origin")
    P = polygon(f)
    M = newton_distance(P)
    payload = polygon_json(f)
    payload.update(input=args.expr, t_star=rat(M.t_star), main_face=M.kind.value)
    rows = [f"vertices: {', '.join(str(v) for v in P.vertices)}"]
    for F in P.faces:
        rows.append(
            f"  face {F.left} -> {F.right}  a = {rat(F.a)}  delta_inv = {rat(F.delta_inv)}"
        )
    rows.append(f"t* = {rat(M.t_star)} ({M.kind.value})")
    _emit(args, payload, "\n".join(rows))
    return EXIT_OK


def cmd_probe(args) -> int:
    f = parse(args.expr)
    v = divergence_probe(f, float(Fraction(args.c)), _field(args), samples_per_shell=args.samples, seed=args.seed)
    payload = {
        "input": args.expr,
        "field": args.field,
        "c": args.c,
        "verdict": v.verdict.value,
        "estimates": [{"radius": r, "estimate": e, "stderr": s} for r, e, s in v.estimates],
        "log_ratio": v.log_ratio,
        "z": v.z_score,
    }
    rows = [f"{'radius':>12} {'estimate':>14} {'stderr':>12}"]
    rows += [f"{r:12.4g} {e:14.6g} {s:12.4g}" for r, e, s in v.estimates]
    rows.append(f"verdict: {v.verdict.value} (z = {v.z_score:.2f})")
    _emit(args, payload, "\n".join(rows))
    return EXIT_OK


def cmd_batch(args) -> int:
    exprs = read_batch_file(args.file)
    ts = batch_lct(exprs, _field(args), _norm(args))
    payload = {
        "field": args.field,
        "normalization": _norm(args).value,
        "entries": [{"input": t, "c0": rat(c)} for t, c in ts.entries],
        "errors": [{"index": i, "input": t, "error": e} for i, t, e in ts.errors],
    }
    if args.runs:
        payload["runs"] = [
            {"start": r.start, "values": [rat(v) for v in r.values], "stabilized": r.stabilized}
            for r in ascending_runs(ts.values())
        ]
    rows = [f"{rat(c):>10}  {t}" for t, c in ts.entries]
    rows += [f"error at line {i + 1}: {e}" for i, _, e in ts.errors]
    _emit(args, payload, "\n".join(rows))
    return EXIT_INPUT if ts.errors and not ts.entries else EXIT_OK


def cmd_accumulate(args) -> int:
    values = []
    with open(args.file, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if line:
                values.append(Fraction(line))
    values.sort()
    tol = Fraction(args.tol)
    cands = accumulation_points(values, tol, _field(args), args.min_count)
    payload = {
        "tol": rat(tol),
        "candidates": [
            {"limit": rat(c.limit), "count": c.count, "nearest": rat(c.nearest), "gap": rat(c.gap)}
            for c in cands
        ],
    }
    rows = [
        f"limit {rat(c.limit)}  count {c.count}  nearest {rat(c.nearest)}  gap {rat(c.gap)}"
        for c in cands
    ] or ["no accumulation candidates"]
    _emit(args, payload, "\n".join(rows))
    return EXIT_OK


def cmd_lattice(args) -> int:
    L = lattice_L(args.N)
    payload = {"N": L.N, "count": L.count, "points": [list(p) for p in L.points]}
    _emit(args, payload, f"N = {L.N}: {L.count} points")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--field", choices=["complex", "real"], default="complex")
    common.add_argument(
        "--normalization", choices=["paper", "index", "lct"], default="paper",
        help="'paper'/'index': sup{c : |f|^-c integrable}; 'lct' halves complex values",
    )
    common.add_argument("--json", action="store_true", help="machine-readable output")

    parser = _Parser(prog="lct", description="Exact integrability index of plane curve germs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compute", parents=[common], help="exact c0 of a polynomial")
    p.add_argument("expr")
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("polygon", parents=[common], help="Newton polygon and main face")
    p.add_argument("expr")
    p.set_defaults(func=cmd_polygon)

    p = sub.add_parser("probe", parents=[common], help="Monte Carlo divergence trend at c")
    p.add_argument("expr")
    p.add_argument("c", help="exponent, e.g. 1.5 or 3/2")
    p.add_argument("--seed", type=int, default=ACCEPTANCE_SEED)
    p.add_argument("--samples", type=int, default=100_000, help="samples per shell")
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("batch", parents=[common], help="c0 for each line of a file")
    p.add_argument("file")
    p.add_argument("--runs", action="store_true", help="report ascending runs")
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("accumulate", parents=[common], help="accumulation candidates in a value file")
    p.add_argument("file")
    p.add_argument("--tol", default="1/100")
    p.add_argument("--min-count", type=int, default=10)
    p.set_defaults(func=cmd_accumulate)

    p = sub.add_parser("lattice", parents=[common], help="enumerate lattice points 0 <= p <= q <= N")
    p.add_argument("N", type=int)
    p.set_defaults(func=cmd_lattice)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INPUT
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_INPUT
    try:
        return args.func(args)
    except InternalAssertionError as exc:
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (ParseError, LctError, ValueError, OSError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
