"""Write one CSV of E, P and D curves per figure preset.

    python3 scripts/reproduce_figures.py [--out results] [--mc 10000] [--steps 200]
"""
import argparse
from dataclasses import replace
from pathlib import Path

from ghz_noise.monte_carlo import McConfig
from ghz_noise.sweeps import PRESETS, emit_csv, preset_spec, run_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--mc", type=int, default=None, help="add Monte-Carlo columns with this many trajectories")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--steps", type=int, default=200)
    args = ap.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    for name in PRESETS:
        spec = preset_spec(name, tau_steps=args.steps)
        if args.mc:
            spec = replace(spec, mc=McConfig(n_trajectories=args.mc, seed=args.seed))
        path = args.out / f"{name}.csv"
        emit_csv(run_sweep(spec), path)
        print(f"{name}: tau_max={spec.tau_max:.4g}, {len(spec.variants)} variant(s) -> {path}")


if __name__ == "__main__":
    main()
