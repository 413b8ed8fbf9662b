"""Entanglement witness, purity and von Neumann decoherence of a state."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError
from .quantum_core import ghz_projector, hermitian_eigen

PURE_REFERENCE_TOL = 1e-10
EIGEN_CLIP = 1e-10


@dataclass(frozen=True)
class MeasureSet:
    """Witness ``E``, purity ``P`` and decoherence ``D`` at time ``tau``.

    ``stderr`` carries the Monte-Carlo max-entry standard error when the
    state came from an ensemble average.
    """

    tau: float
    E: float
    P: float
    D: float
    stderr: Optional[float] = None


def purity(rho) -> float:
    rho = np.asarray(rho, dtype=complex)
    return float(np.sum(np.abs(rho) ** 2))


def witness(rho, reference=None) -> float:
    """``E = -Tr[(I/2 - rho_ref) rho] = Tr[rho_ref rho] - 1/2``.

    Positive values certify GHZ-class entanglement.  The reference defaults
    to the GHZ projector and must be pure.
    """
    ref = ghz_projector() if reference is None else np.asarray(reference, dtype=complex)
    if purity(ref) < 1.0 - PURE_REFERENCE_TOL:
        raise DomainError("witness reference state must be pure")
    rho = np.asarray(rho, dtype=complex)
    return float(np.real(np.trace(ref @ rho))) - 0.5


def entropy_from_eigenvalues(evals) -> float:
    """``-sum l ln l`` with ``0 ln 0 = 0``; eigenvalues in ``[-1e-10, 0)`` count as zero."""
    evals = np.asarray(evals, dtype=float)
    if np.any(evals < -EIGEN_CLIP):
        raise DomainError(f"eigenvalue {evals.min()!r} below -{EIGEN_CLIP}: not a density matrix")
    lam = np.clip(evals, 0.0, None)
    pos = lam[lam > 0]
    return float(-np.sum(pos * np.log(pos))) + 0.0  # no -0.0


def vn_entropy(rho) -> float:
    evals, _ = hermitian_eigen(rho)
    return entropy_from_eigenvalues(evals)


def measure_set(rho, reference=None, tau: float = 0.0, stderr: Optional[float] = None) -> MeasureSet:
    return MeasureSet(tau=float(tau), E=witness(rho, reference), P=purity(rho), D=vn_entropy(rho), stderr=stderr)
