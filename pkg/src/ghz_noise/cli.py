"""Command line front end.

    ghz-noise simulate --preset fig2 [--mc N] [--seed S] [--out PATH]
    ghz-noise simulate --config run.cfg
    ghz-noise verify --quick | --full
    ghz-noise separability --preset fig3
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .analytic_dynamics import separability_time
from .errors import DomainError
from .monte_carlo import McConfig
from .sweeps import PRESETS, parse_config, preset_spec, preset_variants, run_sweep, emit_csv, table_to_csv
from .verification import FULL, QUICK, verify


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ghz-noise", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a tau sweep and write CSV")
    src = sim.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", type=Path, help="key = value or JSON run configuration")
    src.add_argument("--preset", choices=sorted(PRESETS), help="figure preset")
    sim.add_argument("--mc", type=int, metavar="N", help="also average N Monte-Carlo trajectories")
    sim.add_argument("--seed", type=int, help="MC seed (default 0)")
    sim.add_argument("--out", help="output CSV path (default: stdout)")
    sim.add_argument("--tau-max", type=float)
    sim.add_argument("--tau-steps", type=int)
    sim.add_argument("--workers", type=int, default=1, help="threads for MC trajectories")

    ver = sub.add_parser("verify", help="run the self-check suites")
    lvl = ver.add_mutually_exclusive_group()
    lvl.add_argument("--quick", dest="level", action="store_const", const=QUICK)
    lvl.add_argument("--full", dest="level", action="store_const", const=FULL)
    ver.set_defaults(level=QUICK)

    sep = sub.add_parser("separability", help="print the time at which the witness reaches zero")
    sep.add_argument("--preset", required=True, choices=sorted(PRESETS))
    return parser


def _simulate(args) -> int:
    if args.config is not None:
        spec = parse_config(args.config.read_text(encoding="utf-8"))
        if args.tau_max is not None:
            spec = replace(spec, tau_max=args.tau_max)
        if args.tau_steps is not None:
            spec = replace(spec, tau_steps=args.tau_steps)
    else:
        spec = preset_spec(args.preset, tau_max=args.tau_max, tau_steps=args.tau_steps)
    if args.mc is not None or args.seed is not None:
        base = spec.mc or McConfig()
        spec = replace(spec, mc=McConfig(
            n_trajectories=args.mc if args.mc is not None else base.n_trajectories,
            seed=args.seed if args.seed is not None else base.seed,
        ))
    out = args.out or spec.output_path
    table = run_sweep(spec, workers=args.workers)
    if out is None or out == "-":
        sys.stdout.write(table_to_csv(table))
    else:
        emit_csv(table, out)
        print(f"wrote {len(table.rows)} rows to {out}", file=sys.stderr)
    return 0


def _verify(args) -> int:
    report = verify(args.level)
    for suite in report.suites:
        print(suite.line())
    print("verify:", "PASS" if report.passed else "FAIL")
    return 0 if report.passed else 1


def _separability(args) -> int:
    for label, cfg in preset_variants(args.preset):
        tau = separability_time(cfg)
        print(f"{args.preset}{' ' + label if label else ''}\t{tau:.10g}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"simulate": _simulate, "verify": _verify, "separability": _separability}
    try:
        return handlers[args.command](args)
    except (DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
