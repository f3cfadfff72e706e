"""Command line front end.

Exit codes: 0 all checks passed, 1 some verification failed, 2 undecided
items present, 3 usage or parse error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import __version__
from .analysis.checks import foliation_sample, verify_all
from .analysis.escape import coverage_fraction, escape_bracket
from .analysis.gas import collision_sequence, gas_map
from .analysis.iet import iet_classify
from .analysis.returnmap import build_return_map, ghost_complete
from .angle import parse_angle
from .beams import decompose_band, find_exceptional
from .cache import BeamCache, cache_key
from .errors import BilliardError, CountViolation, OutOfRange, ParseError, UndecidableRange, Undecided
from .export import beamset_csv, dumps, enclosure, export_beams_json, import_beams_json, rows_to_csv
from .geometry import StopRule, make_triangle, trace_ray
from .render import render_series, render_unfolding_svg

EXIT_OK, EXIT_FAIL, EXIT_UNDECIDED, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def parse_band(text: str) -> tuple:
    """``"M..N"`` (or ``"M:N"``) to a pair of ints."""
    sep = ".." if ".." in text else ":"
    try:
        a, b = (int(s) for s in text.split(sep))
    except ValueError:
        raise argparse.ArgumentTypeError(f"band must look like M..N, got {text!r}")
    if not a <= 0 <= b or a == b:
        raise argparse.ArgumentTypeError("band needs M <= 0 <= N with M < N")
    return a, b


def _angle_arg(text: str):
    try:
        return parse_angle(text)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=128, help="working precision in bits")
    common.add_argument("--max-precision", type=int, default=1024, help="escalation cap in bits")
    common.add_argument("--steps", type=int, default=100_000, help="crossing budget per ray or beam")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cache-dir", default=None, help="directory for cached beam tables")
    common.add_argument("--format", choices=("json", "svg", "csv"), default="json")
    common.add_argument("--out", default=None, help="write the main output here instead of stdout")
    common.add_argument("--figure", default=None, help="also render a figure to this path")

    p = _Parser(prog="rhombus-billiards", description="Perpendicular billiards in right triangles.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("beams", parents=[common], help="beam table for a band")
    s.add_argument("--alpha", required=True, type=_angle_arg)
    s.add_argument("--band", required=True, type=parse_band, help="M..N, e.g. 0..8 or --band=-3..3")

    s = sub.add_parser("escape", parents=[common], help="nested escape brackets")
    s.add_argument("--alpha", required=True, type=_angle_arg)
    s.add_argument("--nmax", type=int, required=True)
    s.add_argument("--side", choices=("positive", "negative"), default="positive")

    s = sub.add_parser("verify", parents=[common], help="run every check for band -N..N")
    s.add_argument("--alpha", required=True, type=_angle_arg)
    s.add_argument("--n", type=int, required=True)

    s = sub.add_parser("return-map", parents=[common], help="P/M/U partition and ghost completion")
    s.add_argument("--alpha", required=True, type=_angle_arg)
    s.add_argument("--theta", type=_angle_arg, default=parse_angle("pi/2"))
    s.add_argument("--band", required=True, type=parse_band)
    s.add_argument("--max-iter", type=int, default=100)

    s = sub.add_parser("coverage", parents=[common], help="share of L covered by returning beams")
    s.add_argument("--alpha", required=True, type=_angle_arg)
    s.add_argument("--n", type=int, required=True, help="report N = 1..n")

    s = sub.add_parser("render", parents=[common], help="SVG of a trace or a band")
    s.add_argument("--alpha", required=True, type=_angle_arg)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--x", default=None, help="start coordinate on L, decimal or fraction; write negatives as --x=-1/2")
    g.add_argument("--band", type=parse_band, default=None)
    g.add_argument("--gl", action="store_true", help="orbit from the left end of L")

    s = sub.add_parser("trace", parents=[common], help="code of one ray")
    s.add_argument("--alpha", required=True, type=_angle_arg)
    s.add_argument("--x", required=True)
    s.add_argument("--theta", type=_angle_arg, default=parse_angle("pi/2"))

    s = sub.add_parser("sample", parents=[common], help="foliation sampling of perpendicular starts")
    s.add_argument("--alpha", required=True, type=_angle_arg)
    s.add_argument("--count", type=int, default=1000)
    s.add_argument("--ncap", type=int, default=12)

    s = sub.add_parser("gas", parents=[common], help="two-particle system as a triangle billiard")
    s.add_argument("--m1", type=float, required=True)
    s.add_argument("--m2", type=float, required=True)
    s.add_argument("--events", type=int, default=0, help="also list this many predicted collisions")
    return p


def _emit(args, text):
    if isinstance(text, bytes):
        text = text.decode()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cfg(args):
    return make_triangle(args.alpha, args.precision, args.max_precision)


def cmd_beams(args) -> int:
    cfg = _cfg(args)
    M, N = args.band

    def compute():
        return export_beams_json(decompose_band(cfg, M, N, max_steps=args.steps))

    if args.cache_dir:
        key = cache_key(cfg.alpha_spec.canonical, cfg.precision_bits, args.band)
        payload, _ = BeamCache(args.cache_dir).get_or_compute(key, compute)
    else:
        payload = compute()
    need_obj = args.format != "json" or args.figure
    bs = import_beams_json(payload) if need_obj else None
    if args.format == "json":
        _emit(args, payload)
    elif args.format == "csv":
        _emit(args, beamset_csv(bs))
    else:
        _emit(args, render_unfolding_svg(bs))
    if args.figure:
        render_unfolding_svg(bs, args.figure)
    try:
        if N > 0:
            find_exceptional(bs or import_beams_json(payload), "positive")
        if M < 0:
            find_exceptional(bs or import_beams_json(payload), "negative")
    except CountViolation as exc:
        print(f"count violation: {exc}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_escape(args) -> int:
    cfg = _cfg(args)
    seq = escape_bracket(cfg, args.nmax, args.side)
    nested = seq.nested()
    proper = seq.proper()
    rows = []
    for i, e in enumerate(seq.entries):
        rows.append({"N": e.N, "I": [enclosure(e.lo)[0], enclosure(e.hi)[1]], "width": float(e.width),
                     "code": str(e.code),
                     "nested_in_previous": nested[i - 1] if i else None,
                     "proper": proper[i - 1] if i else None})
    ok = all(nested) and seq.widths_nonincreasing()
    if args.format == "csv":
        _emit(args, rows_to_csv(["N", "lo", "hi", "width", "nested", "proper"],
                                [(r["N"], r["I"][0], r["I"][1], r["width"], r["nested_in_previous"], r["proper"])
                                 for r in rows]))
    elif args.format == "svg":
        _emit(args, render_series([r["N"] for r in rows], {"bracket width": [r["width"] for r in rows]},
                                  ylabel="width", logy=True, fmt="svg"))
    else:
        _emit(args, dumps({"alpha_spec": cfg.alpha_spec.canonical, "side": args.side, "entries": rows,
                           "nested": ok}))
    if args.figure:
        render_series([r["N"] for r in rows], {"bracket width": [r["width"] for r in rows]}, args.figure,
                      ylabel="width", logy=True, title=f"escape brackets, alpha = {cfg.alpha_spec}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(args) -> int:
    cfg = _cfg(args)
    report = verify_all(cfg, args.n)
    if args.format == "csv":
        _emit(args, rows_to_csv(["name", "status"], [(c["name"], c["status"]) for c in report["checks"]]))
    else:
        _emit(args, dumps(report))
    return {"pass": EXIT_OK, "fail": EXIT_FAIL}.get(report["status"], EXIT_UNDECIDED)


def cmd_return_map(args) -> int:
    cfg = _cfg(args)
    M, N = args.band
    if not M < 0 < N:
        raise UsageError("return-map needs M < 0 < N")
    part = build_return_map(cfg, args.theta, M, N, max_iter=args.max_iter, max_steps=args.steps)
    ghost = ghost_complete(part)
    comps = iet_classify(ghost, args.max_iter)
    data = {
        "alpha_spec": cfg.alpha_spec.canonical,
        "theta0": args.theta.canonical,
        "band": [M, N],
        "simple_direction_assumed": part.simple_direction_assumed,
        "intervals": [{"I": [enclosure(iv.lo)[0], enclosure(iv.hi)[1]], "class": iv.cls,
                       "code": str(iv.code) if iv.code else None, "period": iv.period} for iv in part.intervals],
        "ghost": [{"I": [enclosure(p.lo)[0], enclosure(p.hi)[1]], "shift": float(p.shift),
                   "ghost": p.label == "ghost"} for p in ghost.pieces],
        "ghost_length_preserving": ghost.is_length_preserving(),
        "ghost_components": [{"kind": c.kind, "period": c.period, "pieces": len(c.intervals)} for c in comps],
        "class_widths": {c: float(part.class_width(c)) for c in ("P", "M", "U")},
    }
    if args.format == "csv":
        _emit(args, rows_to_csv(["lo", "hi", "class", "code", "period"],
                                [(r["I"][0], r["I"][1], r["class"], r["code"], r["period"]) for r in data["intervals"]]))
    else:
        _emit(args, dumps(data))
    return EXIT_OK


def cmd_coverage(args) -> int:
    cfg = _cfg(args)
    rows = []
    for n in range(1, args.n + 1):
        c = coverage_fraction(cfg, n)
        lo, hi = c.enclosure()
        rows.append({"N": n, "coverage_lo": lo, "coverage_hi": hi, "escaping": c.escaping_fraction,
                     "unresolved": c.unresolved_fraction})
    monotone = all(b["coverage_lo"] >= a["coverage_lo"] for a, b in zip(rows, rows[1:]))
    if args.format == "csv":
        _emit(args, rows_to_csv(list(rows[0]), [list(r.values()) for r in rows]))
    elif args.format == "svg":
        _emit(args, render_series([r["N"] for r in rows], {"coverage": [r["coverage_lo"] for r in rows]},
                                  ylabel="covered share of L", fmt="svg"))
    else:
        _emit(args, dumps({"alpha_spec": cfg.alpha_spec.canonical, "rows": rows, "monotone": monotone}))
    if args.figure:
        render_series([r["N"] for r in rows], {"coverage": [r["coverage_lo"] for r in rows]}, args.figure,
                      ylabel="covered share of L", title=f"coverage, alpha = {cfg.alpha_spec}")
    return EXIT_OK if monotone else EXIT_FAIL


def cmd_render(args) -> int:
    cfg = _cfg(args)
    if args.band:
        obj = decompose_band(cfg, *args.band, max_steps=args.steps)
    elif args.gl:
        obj = trace_ray(cfg, cfg.cos_alpha * -1, side=1, stop=StopRule.first_return(args.steps))
    elif args.x is not None:
        obj = trace_ray(cfg, Fraction(args.x), stop=StopRule.first_return(args.steps))
    else:
        obj = None
    svg = render_unfolding_svg(obj)
    _emit(args, svg)
    if args.figure:
        render_unfolding_svg(obj, args.figure)
    return EXIT_OK


def cmd_trace(args) -> int:
    cfg = _cfg(args)
    tr = trace_ray(cfg, Fraction(args.x), args.theta, StopRule.first_return(args.steps))
    term = tr.terminal
    data = {"alpha_spec": cfg.alpha_spec.canonical, "x": args.x, "theta": args.theta.canonical,
            "code": str(tr.code), "p": tr.code.p, "terminal": term.kind, "level": term.level,
            "vertex": term.vertex.label if term.vertex else None,
            "return_offset": enclosure(term.offset) if term.offset is not None else None,
            "center_passages": [[e.step, e.level] for e in tr.center_passages]}
    _emit(args, dumps(data) if args.format != "svg" else render_unfolding_svg(tr))
    if args.figure:
        render_unfolding_svg(tr, args.figure)
    return EXIT_UNDECIDED if term.kind in ("undecided", "budget") else EXIT_OK


def cmd_sample(args) -> int:
    cfg = _cfg(args)
    st = foliation_sample(cfg, args.count, args.ncap or None, seed=args.seed, max_steps=args.steps)
    data = {"alpha_spec": cfg.alpha_spec.canonical, "samples": st.samples, "seed": args.seed,
            "inside_bracket": st.inside_bracket, "periodic": st.periodic, "singular": st.singular,
            "unresolved": st.unresolved, "bracket_fraction": st.bracket_fraction}
    _emit(args, dumps(data))
    return EXIT_UNDECIDED if st.unresolved else EXIT_OK


def cmd_gas(args) -> int:
    g = gas_map(args.m1, args.m2)
    data = {"m1": args.m1, "m2": args.m2, "alpha": g.alpha, "alpha_spec": g.alpha_spec.canonical,
            "exact": g.exact, "in_theorem_range": g.in_theorem_range, "boundary": g.boundary}
    if args.events:
        import random
        rng = random.Random(args.seed)
        x1, x2 = sorted(rng.uniform(0.05, 0.95) for _ in range(2))
        v1, v2 = rng.uniform(-1, 1), rng.uniform(-1, 1)
        data["state"] = [x1, x2, v1, v2]
        data["collisions"] = "".join(collision_sequence(args.m1, args.m2, x1, x2, v1, v2, args.events))
    _emit(args, dumps(data))
    return EXIT_OK


COMMANDS = {"beams": cmd_beams, "escape": cmd_escape, "verify": cmd_verify, "return-map": cmd_return_map,
            "coverage": cmd_coverage, "render": cmd_render, "trace": cmd_trace, "sample": cmd_sample,
            "gas": cmd_gas}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except (ParseError, OutOfRange, UndecidableRange, UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Undecided as exc:
        print(f"undecided: {exc}", file=sys.stderr)
        return EXIT_UNDECIDED
    except BilliardError as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
