"""Closed-form dynamics of the GHZ state under independent Gaussian dephasing.

Averaging ``exp(-i Phi sigma_x)`` over a centred Gaussian phase of variance
``beta`` is exactly a bit-flip channel that leaves ``X`` alone and shrinks
``Y`` and ``Z`` by ``c = exp(-2 beta)``.  Applied to each qubit of the GHZ
state this gives an X-shaped density matrix whose entries only involve the
pair products ``c_i c_j``.  Every closed form below is a function of those
three products.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import ConvergenceError, DomainError
from .measures import MeasureSet
from .noise_kernels import FgKernel, NoiseKernel, PlKernel, beta_closed
from .quantum_core import DIM

LN4 = math.log(4.0)
SEPARABILITY_TOL = 1e-10
MAX_BRACKET = 1e6

PURE_PL = "pure-pl"
PURE_FG = "pure-fg"
PLM = "plm"
FGM = "fgm"
CUSTOM = "custom"
KINDS = (PURE_PL, PURE_FG, PLM, FGM, CUSTOM)


@dataclass(frozen=True)
class NoiseConfiguration:
    """One noise kernel per qubit, plus a tag naming the layout.

    PLM puts PL noise on qubits 0 and 1 and FG noise on qubit 2; FGM is the
    mirror image.  The doubled kernel always sits on the first two qubits.
    """

    kernels: Tuple[NoiseKernel, NoiseKernel, NoiseKernel]
    kind: str = CUSTOM

    def __post_init__(self):
        if len(self.kernels) != 3:
            raise DomainError(f"need exactly three kernels, got {len(self.kernels)}")
        for k in self.kernels:
            if not isinstance(k, (FgKernel, PlKernel)):
                raise DomainError(f"unsupported kernel {k!r}")
        if self.kind not in KINDS:
            raise DomainError(f"unknown configuration kind {self.kind!r}")
        object.__setattr__(self, "kernels", tuple(self.kernels))

    @classmethod
    def pure_pl(cls, g, alpha):
        k = PlKernel(g, alpha)
        return cls((k, k, k), PURE_PL)

    @classmethod
    def pure_fg(cls, hurst):
        k = FgKernel(hurst)
        return cls((k, k, k), PURE_FG)

    @classmethod
    def plm(cls, g, alpha, hurst):
        pl = PlKernel(g, alpha)
        return cls((pl, pl, FgKernel(hurst)), PLM)

    @classmethod
    def fgm(cls, g, alpha, hurst):
        fg = FgKernel(hurst)
        return cls((fg, fg, PlKernel(g, alpha)), FGM)

    def betas(self, tau):
        return tuple(beta_closed(tau, k) for k in self.kernels)


@dataclass(frozen=True)
class DephasingFactors:
    """Decay quantities at one time.

    ``X = c0 c1`` (the doubled pair) and ``Y = (c0 c2 + c1 c2) / 2``; for the
    pure and mixed presets these are ``exp(-4 beta_dominant)`` and
    ``exp(-2 beta_mix)``.  ``eta1 = X`` and ``eta2 = X**2``.
    """

    tau: float
    betas: Tuple[float, float, float]
    c: Tuple[float, float, float]
    eta1: float
    eta2: float
    X: float
    Y: float
    H1: float
    H2: float
    H3: float

    @property
    def pair_products(self):
        c0, c1, c2 = self.c
        return c0 * c1, c0 * c2, c1 * c2

    @property
    def M(self):
        return 1.0 - self.eta1

    @property
    def N(self):
        return 1.0 + 3.0 * self.eta1


def coherence_factor(beta):
    """Per-qubit coherence left after a phase of variance ``beta``."""
    return math.exp(-2.0 * beta)


def factors_from_c(c, tau=float("nan"), betas=(float("nan"),) * 3) -> DephasingFactors:
    c = tuple(float(x) for x in c)
    if len(c) != 3:
        raise DomainError("need three coherence factors")
    for x in c:
        if not (0.0 <= x <= 1.0):
            raise DomainError(f"coherence factor {x!r} outside [0, 1]")
    x_ = c[0] * c[1]
    y_ = 0.5 * (c[0] * c[2] + c[1] * c[2])
    return DephasingFactors(
        tau=float(tau),
        betas=tuple(betas),
        c=c,
        eta1=x_,
        eta2=x_ * x_,
        X=x_,
        Y=y_,
        H1=1.0 + x_ + 2.0 * y_,
        H2=1.0 + x_ - 2.0 * y_,
        H3=1.0 - x_,
    )


def dephasing_factors(config: NoiseConfiguration, tau: float) -> DephasingFactors:
    betas = config.betas(tau)
    return factors_from_c([coherence_factor(b) for b in betas], tau=tau, betas=betas)


def _basis_signs():
    # z-eigenvalue (+1 for |0>) of each qubit, qubit 0 most significant
    idx = np.arange(DIM)
    return np.stack([1 - 2 * ((idx >> (2 - q)) & 1) for q in range(3)], axis=1)


_SIGNS = _basis_signs()


def xstate_from_factors(factors: DephasingFactors, r: float = 1.0) -> np.ndarray:
    """Dephased GHZ state for arbitrary per-qubit coherence factors.

    Diagonal and anti-diagonal entries of basis index ``b`` both equal
    ``(1 + sum_{i<j} c_i c_j z_i z_j) / 8``; the Werner weight ``r`` mixes in
    ``I/8``, which every unital channel fixes.
    """
    if not (0.0 <= r <= 1.0):
        raise DomainError(f"mixedness r must lie in [0, 1], got {r!r}")
    c = factors.c
    for x in c:
        if not (0.0 <= x <= 1.0):
            raise DomainError(f"coherence factor {x!r} outside [0, 1]")
    z = _SIGNS
    vals = (
        1.0
        + c[0] * c[1] * z[:, 0] * z[:, 1]
        + c[0] * c[2] * z[:, 0] * z[:, 2]
        + c[1] * c[2] * z[:, 1] * z[:, 2]
    ) / 8.0
    rho = np.zeros((DIM, DIM), dtype=complex)
    b = np.arange(DIM)
    rho[b, b] = vals
    rho[b, DIM - 1 - b] = vals
    return (1.0 - r) * np.eye(DIM, dtype=complex) / DIM + r * rho


def analytic_rho(config: NoiseConfiguration, tau: float, r: float = 1.0) -> np.ndarray:
    return xstate_from_factors(dephasing_factors(config, tau), r)


def spectrum_offsets(factors: DephasingFactors):
    """``delta_k`` such that the non-zero eigenvalues are ``(1 + delta_k) / 4``."""
    p01, p02, p12 = factors.pair_products
    return np.array([
        p01 + p02 + p12,
        p01 - p02 - p12,
        -p01 + p02 - p12,
        -p01 - p02 + p12,
    ])


def xstate_entropy(deltas) -> float:
    """Entropy of the spectrum ``{(1 + d) / 4}`` (plus four zeros).

    Near the pure state the direct sum is accurate; near the ``ln 4``
    plateau it is rewritten as ``ln 4 - sum f(d) / 4`` with
    ``f(d) = (1 + d) log1p(d) - d >= 0`` so the small deficit keeps its
    relative precision.
    """
    d = np.asarray(deltas, dtype=float)
    lam = (1.0 + d) / 4.0
    lam = np.clip(lam, 0.0, None)
    direct = float(-np.sum(np.where(lam > 0, lam * np.log(np.where(lam > 0, lam, 1.0)), 0.0)))
    if direct < 0.5 * LN4:
        return direct if direct > 0 else 0.0
    one_p = 1.0 + d
    with np.errstate(divide="ignore", invalid="ignore"):
        f = np.where(one_p > 0, one_p * np.log1p(np.maximum(d, -1.0 + 1e-300)), 0.0) - d
    return float(LN4 - 0.25 * np.sum(f))


def analytic_measures(config: NoiseConfiguration, tau: float) -> MeasureSet:
    """Witness, purity and entropy at ``r = 1`` from the closed forms.

    Pure presets use ``E = (3 eta1 - 1)/4`` and ``P = (1 + 3 eta2)/4``;
    PLM/FGM use ``E = (X + 2Y - 1)/4`` and ``P = (1 + X^2 + 2Y^2)/4``.  Custom
    layouts go through the pair products directly.  The entropy always comes
    from the spectrum.
    """
    f = dephasing_factors(config, tau)
    if config.kind in (PURE_PL, PURE_FG):
        e = 0.25 * (3.0 * f.eta1 - 1.0)
        p = 0.25 * (1.0 + 3.0 * f.eta2)
    elif config.kind in (PLM, FGM):
        e = 0.25 * (-1.0 + f.X + 2.0 * f.Y)
        p = 0.25 * (1.0 + f.X**2 + 2.0 * f.Y**2)
    else:
        p01, p02, p12 = f.pair_products
        e = 0.25 * (p01 + p02 + p12 - 1.0)
        p = 0.25 * (1.0 + p01**2 + p02**2 + p12**2)
    return MeasureSet(tau=float(tau), E=e, P=p, D=xstate_entropy(spectrum_offsets(f)))


def pure_decoherence_closed_form(eta1: float) -> float:
    """``-3/4 M ln(M/4) - 1/4 N ln(N/4)`` with ``M = 1 - eta1``, ``N = 1 + 3 eta1``."""
    m, n = 1.0 - eta1, 1.0 + 3.0 * eta1
    out = 0.0
    if m > 0:
        out -= 0.75 * m * math.log(m / 4.0)
    if n > 0:
        out -= 0.25 * n * math.log(n / 4.0)
    return out


def _witness(config, tau):
    f = dephasing_factors(config, tau)
    return 0.25 * (sum(f.pair_products) - 1.0)


def witness_crossing(config: NoiseConfiguration, level: float = 0.0) -> float:
    """Earliest ``tau`` with ``E(tau) = level`` for ``-1/4 < level < 1/2``.

    ``E`` is strictly decreasing, so bisection on a bracket grown by
    doubling from ``[0, 1]`` finds the unique root.
    """
    if not (-0.25 < level < 0.5):
        raise DomainError(f"level {level!r} is never crossed")
    lo, hi = 0.0, 1.0
    while _witness(config, hi) > level:
        lo, hi = hi, 2.0 * hi
        if hi > MAX_BRACKET:
            raise ConvergenceError(f"E stays above {level} for tau <= {MAX_BRACKET:g}")
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _witness(config, mid) > level:
            lo = mid
        else:
            hi = mid
    root = hi if abs(_witness(config, hi) - level) <= abs(_witness(config, lo) - level) else lo
    if abs(_witness(config, root) - level) > SEPARABILITY_TOL:
        raise ConvergenceError("bisection failed to reach the witness tolerance")
    return root


def separability_time(config: NoiseConfiguration) -> float:
    """Time at which the witness first reaches zero."""
    return witness_crossing(config, 0.0)
