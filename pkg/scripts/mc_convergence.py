"""Monte-Carlo z-scores and standard errors against the closed form as the trajectory count grows.

    python3 scripts/mc_convergence.py [--preset fig4] [--mode marginal|path]
"""
import argparse

import numpy as np

from ghz_noise.analytic_dynamics import analytic_rho
from ghz_noise.monte_carlo import McConfig, Mode, compare, mc_rho
from ghz_noise.sweeps import PRESETS, default_tau_max


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--preset", default="fig4", choices=sorted(PRESETS))
    ap.add_argument("--mode", default="marginal", choices=[m.value for m in Mode])
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    variants = PRESETS[args.preset]
    tau_max = default_tau_max(variants)
    taus = np.linspace(tau_max / 10, tau_max, 10)
    print(f"{'variant':<12}{'N':>9}{'max stderr':>13}{'max |dev|':>13}{'max z':>8}")
    for label, cfg in variants:
        for n in (1_000, 10_000, 100_000):
            res = mc_rho(cfg, taus, mc=McConfig(n_trajectories=n, seed=args.seed, mode=Mode(args.mode)))
            reports = [compare(analytic_rho(cfg, t), res, k) for k, t in enumerate(taus)]
            print(f"{label or '-':<12}{n:>9}{max(r.stderr for r in reports):>13.3e}"
                  f"{max(r.max_abs_deviation for r in reports):>13.3e}{max(r.z_score for r in reports):>8.2f}")


if __name__ == "__main__":
    main()
