"""Command-line front end.

    thermobound bounds   --cos-min 0 --cos-max 1 --steps 101 [--format csv|json] [--out FILE]
    thermobound ledger   (--theta T | --cos-theta C) --delta D [--n N --v V --t T --kb K]
    thermobound simulate (--theta T | --cos-theta C) --delta D [--particles N --substeps M
                         --seeds S --seed-base B --exact-counts]

Exit codes: 0 ok, 2 invalid arguments, 3 solver or simulation failure,
4 simulation finished but a comparison with the analytic ledger failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import bounds, cycle, gassim

EXIT_OK, EXIT_USAGE, EXIT_SOLVER, EXIT_TOLERANCE = 0, 2, 3, 4
BOUNDS_HEADER = ("cos_theta", "delta_th", "delta_qi", "delta_hol", "relative_gap")
MIN_SAMPLED_PARTICLES = 100


class UsageError(Exception):
    pass


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _theta(args) -> float:
    if args.theta is not None:
        if not 0.0 <= args.theta <= 0.5 * math.pi:
            raise UsageError(f"--theta must lie in [0, pi/2], got {args.theta}")
        return args.theta
    if not 0.0 <= args.cos_theta <= 1.0:
        raise UsageError(f"--cos-theta must lie in [0, 1], got {args.cos_theta}")
    return math.acos(args.cos_theta)


def _json_only(args) -> None:
    if args.format != "json":
        raise UsageError(f"--format {args.format} is only available for tabular output")


def cmd_bounds(args) -> int:
    if not (0.0 <= args.cos_min < args.cos_max <= 1.0):
        raise UsageError("need 0 <= --cos-min < --cos-max <= 1")
    if args.steps < 2:
        raise UsageError("--steps must be at least 2")
    try:
        rows = bounds.bound_table(args.cos_min, args.cos_max, args.steps)
    except bounds.ConvergenceError as exc:
        print(f"error: solver did not converge at row {exc.row}: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(BOUNDS_HEADER)
        for r in rows:
            writer.writerow([_fmt(getattr(r, k)) for k in BOUNDS_HEADER])
        text = buf.getvalue()
    else:
        text = json.dumps([{k: float(_fmt(getattr(r, k))) for k in BOUNDS_HEADER}
                           for r in rows], indent=2) + "\n"
    _write(text, args.out)
    return EXIT_OK


def cmd_ledger(args) -> int:
    _json_only(args)
    try:
        params = cycle.CycleParams(n_particles=args.n, volume=args.v, temperature=args.t,
                                   boltzmann=args.kb, theta=_theta(args), delta=args.delta)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    doc = cycle.ledger(params).to_dict()
    doc["second_law"] = cycle.classify_second_law(params)
    _write(json.dumps(doc, indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    _json_only(args)
    if not args.exact_counts and args.particles < MIN_SAMPLED_PARTICLES:
        raise UsageError(f"--particles must be at least {MIN_SAMPLED_PARTICLES} in sampled mode")
    if args.seeds < 1:
        raise UsageError("--seeds must be at least 1")
    try:
        params = cycle.CycleParams(n_particles=args.particles, theta=_theta(args),
                                   delta=args.delta)
        config = gassim.SimConfig(params, wall_substeps=args.substeps,
                                  seeds=tuple(range(args.seed_base, args.seed_base + args.seeds)),
                                  sample_measurements=not args.exact_counts)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    try:
        report = gassim.simulate_cycle(config, workers=args.workers)
    except gassim.SimulationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    _write(report.to_json() + "\n", args.out)
    return EXIT_OK if report.passed else EXIT_TOLERANCE


def _add_angle(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--theta", type=float, help="overlap angle in radians, [0, pi/2]")
    g.add_argument("--cos-theta", type=float, help="overlap |<psi1|psi2>|, [0, 1]")
    p.add_argument("--delta", type=float, required=True, help="demon accuracy in [0, 1]")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thermobound",
        description="Discrimination bounds, cycle work ledgers and gas simulations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="delta_th, delta_qi, delta_hol on a cos(theta) grid")
    p.add_argument("--cos-min", type=float, default=0.0)
    p.add_argument("--cos-max", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=101)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("ledger", help="closed-form work ledger as JSON")
    _add_angle(p)
    p.add_argument("--n", type=float, default=1.0, help="particle number N")
    p.add_argument("--v", type=float, default=1.0, help="cylinder volume V")
    p.add_argument("--t", type=float, default=1.0, help="temperature T")
    p.add_argument("--kb", type=float, default=1.0, help="Boltzmann constant")
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_ledger)

    p = sub.add_parser("simulate", help="Monte Carlo cycle vs analytic ledger, JSON report")
    _add_angle(p)
    p.add_argument("--particles", type=int, default=100_000)
    p.add_argument("--substeps", type=int, default=4096)
    p.add_argument("--seeds", type=int, default=16, help="number of seeds")
    p.add_argument("--seed-base", type=int, default=0, help="first seed")
    p.add_argument("--exact-counts", action="store_true",
                   help="use expected counts instead of sampling")
    p.add_argument("--workers", type=int, default=1, help="threads for seed runs")
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
