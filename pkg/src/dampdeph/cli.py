"""Command-line front end emitting CSV data for the channel's rate curves.

Subcommands::

    point     all quantities at one (p, g)
    sweep-g   fixed p, grid over g: ic, ir, yield, lower_bound
    phase     2-D (p, g) grid: everything (use --skip-nonadd to drop delta)
    nonadd    fixed p, grid over g: ic and delta_nonadd
    bounds    fixed g, grid over p (or fixed p, grid over g): lower bound vs half-MI
    protocol  one recurrence step
    check     invariant suite; exit 1 on failure

Exit codes: 0 success, 1 failed check, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .capacity import ANSATZ_RESTARTS, INTERVAL_TOL
from .channels import ChannelParams
from .checks import run_checks
from .distillation import ProtocolConfig, recurrence_step
from .scan import ALL_QUANTITIES, ScanSettings, phase_scan, records_to_csv, write_csv


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _grid(lo, hi, steps):
    return np.round(np.linspace(lo, hi, steps), 12) if steps > 1 else np.array([lo])


def _common(sp, grid_p=False, grid_g=False, fixed_p=False, fixed_g=False):
    if fixed_p:
        sp.add_argument("--p", type=float, required=True, help="dephasing probability")
    if fixed_g:
        sp.add_argument("--g", type=float, required=True, help="damping probability")
    if grid_p:
        sp.add_argument("--p-min", type=float, default=0.0)
        sp.add_argument("--p-max", type=float, default=0.5)
        sp.add_argument("--p-steps", type=int, default=21)
    if grid_g:
        sp.add_argument("--g-min", type=float, default=0.0)
        sp.add_argument("--g-max", type=float, default=1.0)
        sp.add_argument("--g-steps", type=int, default=21)
    sp.add_argument("--out", default=None, help="CSV file (default: standard output)")
    sp.add_argument("--tol", type=float, default=INTERVAL_TOL, help="optimizer interval width")
    sp.add_argument("--seed", type=int, default=0, help="seed of the ansatz restart stream")
    sp.add_argument("--restarts", type=int, default=ANSATZ_RESTARTS, help="ansatz restarts")
    sp.add_argument("--jobs", type=int, default=1, help="worker processes")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="dampdeph", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    sp = sub.add_parser("point", help="all quantities at one (p, g)")
    _common(sp, fixed_p=True, fixed_g=True)
    sp.add_argument("--skip-nonadd", action="store_true")

    sp = sub.add_parser("sweep-g", help="fixed p, grid over g")
    _common(sp, fixed_p=True, grid_g=True)

    sp = sub.add_parser("phase", help="2-D (p, g) grid")
    _common(sp, grid_p=True, grid_g=True)
    sp.add_argument("--skip-nonadd", action="store_true")

    sp = sub.add_parser("nonadd", help="fixed p, delta over a g grid")
    _common(sp, fixed_p=True, grid_g=True)

    sp = sub.add_parser("bounds", help="lower bound against half mutual information")
    _common(sp, grid_p=True, grid_g=True)

    sp = sub.add_parser("protocol", help="one modified recurrence step")
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--g", type=float, required=True)
    sp.add_argument("--s", type=float, default=0.5, help="input asymmetry weight")

    sub.add_parser("check", help="run the invariant suite")
    return ap


def _emit(records, out):
    if out:
        write_csv(records, out)
    else:
        sys.stdout.write(records_to_csv(records))


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    if args.cmd == "check":
        results = run_checks()
        for name, ok, detail in results:
            print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
        return 0 if all(ok for _, ok, _ in results) else 1

    try:
        if args.cmd == "protocol":
            out = recurrence_step(ProtocolConfig(ChannelParams(args.p, args.g), args.s))
            print(f"success_prob={out.success_prob:.12g}")
            print(f"bell_fidelity={out.bell_fidelity:.12g}")
            print(f"q={out.q:.12g}")
            return 0

        base = dict(restarts=args.restarts, seed=args.seed, tol=args.tol)
        if args.cmd == "point":
            ChannelParams(args.p, args.g)
            q = ALL_QUANTITIES - ({"delta_nonadd"} if args.skip_nonadd else set())
            recs = phase_scan([args.p], [args.g], ScanSettings(frozenset(q), **base))
        elif args.cmd == "sweep-g":
            q = frozenset({"ic", "ir", "yield", "lower_bound"})
            recs = phase_scan([args.p], _grid(args.g_min, args.g_max, args.g_steps),
                              ScanSettings(q, **base), jobs=args.jobs)
        elif args.cmd == "phase":
            q = ALL_QUANTITIES - ({"delta_nonadd"} if args.skip_nonadd else set())
            recs = phase_scan(_grid(args.p_min, args.p_max, args.p_steps),
                              _grid(args.g_min, args.g_max, args.g_steps),
                              ScanSettings(frozenset(q), **base), jobs=args.jobs)
        elif args.cmd == "nonadd":
            q = frozenset({"ic", "delta_nonadd"})
            recs = phase_scan([args.p], _grid(args.g_min, args.g_max, args.g_steps),
                              ScanSettings(q, **base), jobs=args.jobs)
        elif args.cmd == "bounds":
            q = frozenset({"ir", "yield", "lower_bound", "half_mi"})
            recs = phase_scan(_grid(args.p_min, args.p_max, args.p_steps),
                              _grid(args.g_min, args.g_max, args.g_steps),
                              ScanSettings(q, **base), jobs=args.jobs)
        else:  # pragma: no cover - argparse restricts choices
            ap.error(f"unknown command {args.cmd}")
    except ValueError as exc:
        print(f"dampdeph: error: {exc}", file=sys.stderr)
        ap.print_usage(sys.stderr)
        return 2
    _emit(recs, args.out)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
