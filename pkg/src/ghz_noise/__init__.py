"""Entanglement and coherence of a three-qubit GHZ state under classical
power-law and fractional Gaussian dephasing noise."""

from .analytic_dynamics import (
    NoiseConfiguration,
    analytic_measures,
    analytic_rho,
    dephasing_factors,
    separability_time,
    xstate_from_factors,
)
from .measures import MeasureSet, measure_set, purity, vn_entropy, witness
from .monte_carlo import McConfig, Mode, compare, mc_rho
from .noise_kernels import FgKernel, PlKernel, beta_fg_closed, beta_mix, beta_pl_closed, beta_quadrature
from .quantum_core import ghz_density

__version__ = "0.1.0"
