"""Print the separability time and the asymptote-based tau_max for every preset variant."""
from ghz_noise.analytic_dynamics import separability_time, witness_crossing
from ghz_noise.sweeps import ASYMPTOTE_GAP, PRESETS


def main():
    print(f"{'preset':<8}{'variant':<12}{'tau_sep':>14}{'tau_plateau':>14}")
    for name, variants in PRESETS.items():
        for label, cfg in variants:
            sep = separability_time(cfg)
            plateau = witness_crossing(cfg, -0.25 + ASYMPTOTE_GAP)
            print(f"{name:<8}{label or '-':<12}{sep:>14.6g}{plateau:>14.6g}")


if __name__ == "__main__":
    main()
