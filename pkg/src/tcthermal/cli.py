"""Command-line front end.

Subcommands:

- ``sweep``: one entanglement measure against interaction time, as CSV.
- ``criterion``: Fock-state ground-start criterion table (threshold and maximum).
- ``verify``: oracle-equivalence and invariant suites.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource guard.
"""

from __future__ import annotations

import argparse
import shlex
import sys
import time
from typing import IO, Sequence

from . import __version__, checks
from .entanglement import fock_gg_maximum, fock_gg_threshold
from .field_thermal import DEFAULT_EPSILON
from .scenarios import ResourceGuardError, ScenarioConfig, default_grid, sweep

MEASURE_FLAGS = {"atom-atom": "atom_atom_negativity", "atom-field": "atom_field_lower_bound"}


def fmt(x: float) -> str:
    return f"{x:.17g}"


def create_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tcthermal",
        description="Two two-level atoms interacting with a single-mode thermal field.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="entanglement against interaction time (CSV)",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--initial", choices=["ee", "eg", "gg", "mixed"], default="eg",
                   help="initial two-atom state")
    p.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="excited-state weight of each atom for --initial mixed")
    p.add_argument("--nbar", type=float, default=1.0, help="mean thermal photon number")
    p.add_argument("--gamma", type=float, default=1.0, help="atom-field coupling")
    p.add_argument("--tmax", type=float, default=20.0, help="largest gamma*t on the grid")
    p.add_argument("--steps", type=int, default=400, help="number of grid points, t=0 included")
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON,
                   help="thermal tail probability discarded by truncation")
    p.add_argument("--measure", choices=sorted(MEASURE_FLAGS), default="atom-atom",
                   help="atom-atom negativity or atom-field projected lower bound")
    p.add_argument("--workers", type=int, default=1, help="threads for grid evaluation")
    p.add_argument("--out", default="-", help="output CSV path ('-' for stdout)")

    p = sub.add_parser("criterion", help="Fock-state ground-start criterion table (CSV)",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--ell-max", type=int, default=6, help="largest Fock number tabulated")
    p.add_argument("--out", default="-", help="output CSV path ('-' for stdout)")

    p = sub.add_parser("verify", help="run oracle and invariant checks",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--suite", choices=["all", *checks.SUITES], default="all")
    return parser


def _open_out(path: str) -> IO[str]:
    return sys.stdout if path == "-" else open(path, "w", newline="")


def _manifest(argv: Sequence[str], items: dict, seconds: float) -> list[str]:
    lines = [f"# command: tcthermal {shlex.join(argv)}", f"# version: {__version__}"]
    lines += [f"# {k}: {v}" for k, v in items.items()]
    lines.append(f"# wall_clock_seconds: {seconds:.3f}")
    return lines


def cmd_sweep(args, argv, parser) -> int:
    if args.initial == "mixed" and args.lam is None:
        parser.error("--initial mixed requires --lambda")
    if args.steps < 1:
        parser.error("--steps must be positive")
    if args.tmax <= 0:
        parser.error("--tmax must be positive")
    if args.workers < 1:
        parser.error("--workers must be positive")
    try:
        config = ScenarioConfig(
            initial=args.initial, nbar=args.nbar, lam=args.lam, gamma=args.gamma,
            t_grid=default_grid(args.tmax, args.steps) / args.gamma, epsilon=args.epsilon)
    except ValueError as exc:
        parser.error(str(exc))

    start = time.perf_counter()
    try:
        series = sweep(config, MEASURE_FLAGS[args.measure], workers=args.workers)
    except ResourceGuardError as exc:
        print(f"tcthermal: {exc}", file=sys.stderr)
        return 3
    elapsed = time.perf_counter() - start

    items = {
        "initial": args.initial, "lambda": args.lam, "nbar": args.nbar, "gamma": args.gamma,
        "tmax": args.tmax, "steps": args.steps, "epsilon": args.epsilon, "measure": args.measure,
        "truncation_N": series.truncation.cutoff, "field_dim": series.truncation.field_dim,
        "tail_mass": fmt(series.truncation.tail_mass),
    }
    out = _open_out(args.out)
    try:
        for line in _manifest(argv, items, elapsed):
            out.write(line + "\n")
        out.write("gamma_t,value,trace_deficit\n")
        for gt, v, d in zip(series.gamma_t, series.values, series.trace_deficit):
            out.write(f"{fmt(gt)},{fmt(v)},{fmt(d)}\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_criterion(args, argv, parser) -> int:
    if args.ell_max < 1:
        parser.error("--ell-max must be at least 1")
    start = time.perf_counter()
    rows = []
    for ell in range(1, args.ell_max + 1):
        c_max, e_max = fock_gg_maximum(ell)
        rows.append((ell, fock_gg_threshold(ell), c_max, e_max))
    out = _open_out(args.out)
    try:
        for line in _manifest(argv, {"ell_max": args.ell_max}, time.perf_counter() - start):
            out.write(line + "\n")
        out.write("ell,c_s,argmax_c,max_value\n")
        for ell, cs, cm, em in rows:
            out.write(f"{ell},{fmt(cs)},{fmt(cm)},{fmt(em)}\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_verify(args, argv, parser) -> int:
    results = []
    suites = list(checks.SUITES) if args.suite == "all" else [args.suite]
    for name in suites:
        print(f"== suite: {name}")
        start = time.perf_counter()
        res = checks.run_suite(name)
        for r in res:
            print(r.line())
        print(f"   ({time.perf_counter() - start:.1f} s)")
        results += res
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return 1 if failed else 0


COMMANDS = {"sweep": cmd_sweep, "criterion": cmd_criterion, "verify": cmd_verify}


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = create_parser()
    args = parser.parse_args(argv)
    return COMMANDS[args.command](args, argv, parser)


if __name__ == "__main__":
    sys.exit(main())
