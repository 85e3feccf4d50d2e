"""Command-line front end.

Exit codes: 0 accept (or normal halt), 1 reject, 2 step budget exhausted,
3 invalid input, 4 macrostate straddling the partition.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import amari, formats, render
from .dfa import RectMacrostate, build_transfer_operator, dfa_orbit, fp_apply, rasterize
from .errors import AutomatonError, StraddlesPartition
from .goedel import compile_nda, cylinder_rect, symbol_partition
from .symbolic import DottedSequence, gs_run

EXIT_ACCEPT, EXIT_REJECT, EXIT_BUDGET, EXIT_INVALID, EXIT_STRADDLE = 0, 1, 2, 3, 4
OUTCOME_EXIT = {"accept": EXIT_ACCEPT, "halt": EXIT_ACCEPT, "reject": EXIT_REJECT, "budget": EXIT_BUDGET}


class CliError(Exception):
    def __init__(self, message, code=EXIT_INVALID):
        super().__init__(message)
        self.code = code


def _out_dir(args) -> Path | None:
    if args.out is None:
        return None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _dotted(text, alphabet=None) -> DottedSequence:
    try:
        return DottedSequence.from_written(text, alphabet)
    except ValueError as exc:
        raise CliError(f"--input: {exc}") from None


def cmd_parse(args) -> int:
    definition = formats.load_definition(args.definition)
    text = args.input or ""
    if "." in text.split():
        s0 = _dotted(text, definition.gs.alphabet)
    else:
        s0 = definition.initial(text.split())
    trace = gs_run(definition.gs, s0, args.steps)
    out = _out_dir(args)
    if out is not None:
        formats.write_trace_jsonl(trace, out / "trace.jsonl")
        (out / "trace.txt").write_text(formats.trace_table(trace), encoding="utf-8")
    if args.format == "json":
        for rec in formats.trace_records(trace):
            print(json.dumps(rec, ensure_ascii=False))
    else:
        sys.stdout.write(formats.trace_table(trace))
    return OUTCOME_EXIT[trace.outcome]


def cmd_compile(args) -> int:
    definition = formats.load_definition(args.definition)
    if definition.coding is None:
        raise CliError("definition has no 'coding' block; a Goedel coding is required to compile")
    m = compile_nda(definition.gs, definition.coding)
    out = _out_dir(args) or Path(".")
    formats.dump_json(formats.nda_to_json(m), out / "nda.json")
    c = m.coding
    print(f"background partition: {len(symbol_partition(c))} rectangles (b_L={c.b_L}, b_R={c.b_R})")
    print(f"branches: {len(m.branches)}")
    for b in m.branches:
        print(f"  {b.cell}  {b.label}")
    return 0


def _initial_rect(m, text):
    s = _dotted(text)
    try:
        return RectMacrostate(cylinder_rect(s.stack, s.input, m.coding))
    except AutomatonError as exc:
        raise CliError(f"--input: {exc}") from None


def _write_grid(out, densities):
    for t, d in enumerate(densities):
        formats.dump_json(formats.density_to_json(d), out / f"density_{t}.json")
        formats.write_density_bin(d, out / f"density_{t}.bin")


def cmd_dfa(args) -> int:
    m = formats.nda_from_json(args.nda)
    r0 = _initial_rect(m, args.input)
    try:
        orbit = dfa_orbit(m, r0, args.steps)
    except StraddlesPartition as exc:
        raise CliError(f"step {exc.step}: {exc}", EXIT_STRADDLE) from None
    out = _out_dir(args) or Path(".")
    formats.dump_json(formats.orbit_to_json(orbit), out / "orbit.json")
    for t, r in enumerate(orbit):
        print(f"t={t}  {r.support}  weight={formats.frac_str(r.weight)}")
    if args.grid is not None:
        op = build_transfer_operator(m, args.grid)
        densities = [rasterize(r0, args.grid)]
        for _ in range(args.steps):
            densities.append(fp_apply(op, densities[-1]))
        _write_grid(out, densities)
        exact = all(np.array_equal(d.cells, rasterize(r, args.grid).cells) for d, r in zip(densities, orbit))
        print(f"grid n={args.grid}: {'bit-identical to' if exact else 'DIFFERS from'} rasterized orbit")
    if args.svg:
        (out / "orbit.svg").write_text(render.orbit_svg(orbit))
        (out / "dod.svg").write_text(render.symbologram_svg(m, "dod"))
        (out / "doe.svg").write_text(render.symbologram_svg(m, "doe"))
    return 0


def cmd_grid(args) -> int:
    m = formats.nda_from_json(args.nda)
    if args.grid is None:
        raise CliError("grid requires --grid <n>")
    op = build_transfer_operator(m, args.grid)
    out = _out_dir(args) or Path(".")
    formats.dump_json(formats.operator_to_json(op), out / "operator.json")
    sums = op.row_sums()
    print(f"operator n={op.n}: {sum(1 for _ in op.triples())} entries, "
          f"row sums in [{sums.min():.17g}, {sums.max():.17g}]")
    if args.input:
        d = rasterize(_initial_rect(m, args.input), args.grid)
        densities = [d]
        for _ in range(args.steps):
            densities.append(fp_apply(op, densities[-1]))
        _write_grid(out, densities)
        for t, d in enumerate(densities):
            print(f"t={t}  mass={float(d.mass()):.17g}  support cells={int(d.support().sum())}")
    return 0


def cmd_stability(args) -> int:
    cfg, integ = formats.stability_config_from_json(args.config)
    report = amari.find_fixed_points(cfg)
    out = _out_dir(args)
    if args.format == "json":
        print(json.dumps(formats.report_to_json(report), indent=2))
    else:
        print(report.table())
    if out is not None:
        formats.dump_json(formats.report_to_json(report), out / "report.json")
        u, fu = amari.plot_data(cfg)
        with open(out / "plot.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["u", "gain_f_u"])
            w.writerows(zip(map(repr, u.tolist()), map(repr, fu.tolist())))
        starts = integ.get("u_init", [])
        for k, u_init in enumerate(starts if isinstance(starts, list) else [starts]):
            traj = amari.integrate(cfg, float(u_init), float(integ.get("dt", 0.1)), int(integ.get("steps", 1000)))
            dt = float(integ.get("dt", 0.1))
            with open(out / f"trajectory_{k}.csv", "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(["t", "u"])
                w.writerows((format(i * dt, ".12g"), repr(v)) for i, v in enumerate(traj.tolist()))
    return 0


def cmd_render(args) -> int:
    m = formats.nda_from_json(args.nda)
    out = _out_dir(args) or Path(".")
    (out / "dod.svg").write_text(render.symbologram_svg(m, "dod"))
    (out / "doe.svg").write_text(render.symbologram_svg(m, "doe"))
    if args.input:
        try:
            orbit = dfa_orbit(m, _initial_rect(m, args.input), args.steps)
        except StraddlesPartition as exc:
            raise CliError(f"step {exc.step}: {exc}", EXIT_STRADDLE) from None
        (out / "orbit.svg").write_text(render.orbit_svg(orbit))
    return 0


class _Parser(argparse.ArgumentParser):
    # usage errors count as invalid input, not as argparse's default status 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dfautomata", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, steps_default):
        p.add_argument("--input", default="", help="input words, or a dotted state 'S . NP V NP'")
        p.add_argument("--steps", type=int, default=steps_default)
        p.add_argument("--out", default=None, help="output directory")

    p = sub.add_parser("parse", help="run the generalized shift symbolically")
    p.add_argument("definition")
    common(p, 1000)
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("compile", help="compile a definition into nda.json")
    p.add_argument("definition")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("dfa", help="evolve a rectangular macrostate")
    p.add_argument("nda")
    common(p, 5)
    p.add_argument("--grid", type=int, default=None)
    p.add_argument("--svg", action="store_true")
    p.set_defaults(func=cmd_dfa)

    p = sub.add_parser("grid", help="export the discretized transfer operator")
    p.add_argument("nda")
    common(p, 5)
    p.add_argument("--grid", type=int, default=None)
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("stability", help="fixed points of a piecewise-constant field")
    p.add_argument("config")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("render", help="write symbologram SVGs")
    p.add_argument("nda")
    common(p, 5)
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "steps", 0) < 0:
        print("error: --steps must be >= 0", file=sys.stderr)
        return EXIT_INVALID
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except StraddlesPartition as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STRADDLE
    except (AutomatonError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
