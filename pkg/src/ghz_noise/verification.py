"""Self-check suites behind ``ghz-noise verify``."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, List

import numpy as np

from . import analytic_dynamics as ad
from .monte_carlo import McConfig, compare, mc_rho
from .noise_kernels import FgKernel, PlKernel, beta_closed, beta_quadrature
from .quantum_core import apply_bitflip_channel, ghz_density
from .sweeps import PRESETS, default_tau_max

QUICK, FULL = "quick", "full"
QUADRATURE_RTOL = 1e-6
CHANNEL_ATOL = 1e-12
MC_Z_MAX = 5.0

QUADRATURE_TAUS = np.logspace(-2, 1, 13)
QUADRATURE_KERNELS = (
    FgKernel(0.1), FgKernel(0.5), FgKernel(0.9),
    PlKernel(1e-2, 2.1), PlKernel(1.0, 3.0), PlKernel(0.1, 3.0),
)
MC_PRESETS = ("fig2", "fig3", "fig4", "fig5")
MC_POINTS = 10


@dataclass
class SuiteResult:
    name: str
    passed: bool
    metric: float
    tolerance: float
    detail: str = ""
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: {self.detail} (metric={self.metric:.3e}, tol={self.tolerance:g}, {self.seconds:.2f}s)"


@dataclass
class VerifyReport:
    level: str
    suites: List[SuiteResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.suites)


def quadrature_suite() -> SuiteResult:
    worst = 0.0
    for k in QUADRATURE_KERNELS:
        for tau in QUADRATURE_TAUS:
            exact = beta_closed(tau, k)
            err = abs(beta_quadrature(k, tau) - exact) / max(exact, 1e-12)
            worst = max(worst, err)
    return SuiteResult("quadrature-vs-closed-form", worst <= QUADRATURE_RTOL, worst, QUADRATURE_RTOL,
                       f"{len(QUADRATURE_KERNELS) * len(QUADRATURE_TAUS)} (kernel, tau) pairs, max relative error")


def triple_channel(c, r) -> np.ndarray:
    rho = ghz_density(r)
    for q, cq in enumerate(c):
        rho = apply_bitflip_channel(rho, q, (1.0 - cq) / 2.0)
    return rho


def channel_suite(n: int = 200, seed: int = 12345) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        c = rng.uniform(0.0, 1.0, size=3)
        r = rng.uniform(0.0, 1.0)
        got = ad.xstate_from_factors(ad.factors_from_c(c), r)
        worst = max(worst, float(np.max(np.abs(got - triple_channel(c, r)))))
    return SuiteResult("channel-equivalence", worst <= CHANNEL_ATOL, worst, CHANNEL_ATOL,
                       f"{n} random (c1, c2, c3, r) tuples, max entry deviation")


def mc_suite(n_trajectories: int, seed: int = 2024, presets=MC_PRESETS) -> SuiteResult:
    worst_z = 0.0
    parts = []
    for name in presets:
        for label, cfg in PRESETS[name]:
            tau_max = default_tau_max([(label, cfg)])
            taus = np.linspace(tau_max / MC_POINTS, tau_max, MC_POINTS)
            res = mc_rho(cfg, taus, 1.0, McConfig(n_trajectories=n_trajectories, seed=seed))
            z = max(compare(ad.analytic_rho(cfg, t), res, k).z_score for k, t in enumerate(taus))
            parts.append(f"{name}{'/' + label if label else ''} z={z:.2f}")
            worst_z = max(worst_z, z)
    return SuiteResult("mc-agreement", worst_z <= MC_Z_MAX, worst_z, MC_Z_MAX,
                       f"N={n_trajectories}, {MC_POINTS} tau points; " + ", ".join(parts))


def monotonicity_violations(cfg, tau_max: float, n_points: int = 1000) -> int:
    grid = np.linspace(0.0, tau_max, n_points)
    rows = [ad.analytic_measures(cfg, t) for t in grid]
    e = np.array([m.E for m in rows])
    p = np.array([m.P for m in rows])
    d = np.array([m.D for m in rows])
    return int(np.sum(np.diff(e) > 0) + np.sum(np.diff(p) > 0) + np.sum(np.diff(d) < 0))


def monotonicity_suite(n_points: int = 1000) -> SuiteResult:
    total = 0
    count = 0
    for name, variants in PRESETS.items():
        tau_max = default_tau_max(variants)
        for _, cfg in variants:
            total += monotonicity_violations(cfg, tau_max, n_points)
            count += 1
    return SuiteResult("monotonicity", total == 0, float(total), 0.0,
                       f"{count} configurations x {n_points} points, violations of E/P non-increasing, D non-decreasing")


def _timed(fn: Callable[[], SuiteResult]) -> SuiteResult:
    start = time.perf_counter()
    res = fn()
    res.seconds = time.perf_counter() - start
    return res


def verify(level: str = QUICK) -> VerifyReport:
    if level not in (QUICK, FULL):
        raise ValueError(f"level must be {QUICK!r} or {FULL!r}")
    n = 10_000 if level == QUICK else 100_000
    report = VerifyReport(level)
    for fn in (quadrature_suite, channel_suite, lambda: mc_suite(n), monotonicity_suite):
        report.suites.append(_timed(fn))
    return report
