"""Monte-Carlo oracle: average unitary trajectories over Gaussian noise phases.

The evolution operator at time ``tau`` depends on the noise path only
through the accumulated phase ``Phi(tau)``, which is Gaussian with variance
``beta(tau)``.  MARGINAL mode draws that phase directly; PATH mode draws
correlated phases over a whole time grid from the Cholesky factor of the
phase covariance, which exercises the covariance machinery too.

Randomness is counter-based.  Trajectories are grouped in fixed blocks of
``BLOCK_SIZE``; block ``b`` owns a Philox stream keyed by ``(seed, b)``, so
the draws of trajectory ``i`` depend only on ``(seed, i)`` and the draw
shape.  Block sums are combined by a pairwise tree whose shape depends only
on the number of blocks, making results bitwise independent of the number
of workers.
"""
from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .analytic_dynamics import NoiseConfiguration
from .errors import DomainError
from .measures import MeasureSet, measure_set
from .noise_kernels import beta_closed, phase_covariance_grid
from .quantum_core import DIM, QubitParams, batched_single_qubit_unitaries, ghz_density

BLOCK_SIZE = 4096
MIN_TRAJECTORIES = 100
PSD_CLIP_TOL = 1e-8
Z_THRESHOLD = 5.0


class Mode(enum.Enum):
    MARGINAL = "marginal"
    PATH = "path"


@dataclass(frozen=True)
class McConfig:
    n_trajectories: int = 10_000
    seed: int = 0
    mode: Mode = Mode.MARGINAL
    workers: int = 1

    def __post_init__(self):
        if int(self.n_trajectories) != self.n_trajectories or self.n_trajectories < MIN_TRAJECTORIES:
            raise DomainError(f"n_trajectories must be an integer >= {MIN_TRAJECTORIES}")
        if not (0 <= int(self.seed) < 2**64) or int(self.seed) != self.seed:
            raise DomainError("seed must be a 64-bit unsigned integer")
        if self.workers < 1:
            raise DomainError("workers must be >= 1")
        object.__setattr__(self, "mode", Mode(self.mode))


@dataclass(frozen=True)
class TrajectorySample:
    """Accumulated phases; shape ``(3,)`` in marginal mode, ``(len(grid), 3)`` in path mode."""

    phases: np.ndarray
    grid: Optional[np.ndarray] = None


@dataclass
class McResult:
    taus: np.ndarray
    rho_mean: np.ndarray  # (K, 8, 8)
    stderr_matrix: np.ndarray  # (K, 8, 8)
    n_trajectories: int
    measures: List[MeasureSet] = field(default_factory=list)

    @property
    def entry_stderr(self) -> np.ndarray:
        return self.stderr_matrix.reshape(len(self.taus), -1).max(axis=1)


@dataclass(frozen=True)
class CompareReport:
    max_abs_deviation: float
    stderr: float
    z_score: float
    threshold: float = Z_THRESHOLD

    @property
    def passed(self) -> bool:
        return self.z_score <= self.threshold


# --- random numbers ----------------------------------------------------------


def _block_generator(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=int(seed) + (int(block) << 64)))


def _block_normals(seed: int, block: int, n_points: int) -> np.ndarray:
    """Standard normals of shape ``(n_points, BLOCK_SIZE, 3)`` for one block."""
    return _block_generator(seed, block).standard_normal((n_points, BLOCK_SIZE, 3))


def _trajectory_normals(seed: int, index: int, n_points: int) -> np.ndarray:
    if index < 0:
        raise DomainError("trajectory index must be non-negative")
    block, offset = divmod(int(index), BLOCK_SIZE)
    return _block_normals(seed, block, n_points)[:, offset, :]


# --- sampling ----------------------------------------------------------------


def _sqrt_betas(config: NoiseConfiguration, taus) -> np.ndarray:
    """``sqrt(beta_q(tau_k))`` with shape ``(K, 3)``."""
    taus = np.atleast_1d(np.asarray(taus, dtype=float))
    return np.sqrt(np.stack([np.atleast_1d(beta_closed(taus, k)) for k in config.kernels], axis=1))


def sample_phases_marginal(seed: int, trajectory_index: int, config: NoiseConfiguration, tau: float) -> TrajectorySample:
    """Three independent phases with variances ``beta_q(tau)``."""
    z = _trajectory_normals(seed, trajectory_index, 1)[0]
    return TrajectorySample(phases=_sqrt_betas(config, tau)[0] * z)


def cholesky(cov) -> np.ndarray:
    """Lower-triangular ``L`` with ``L L^T = cov`` for a PSD matrix.

    Eigenvalues in ``[-1e-8, 0)`` are clipped to zero first; zero pivots
    (e.g. a ``t = 0`` grid point) give zero columns.
    """
    a = np.array(cov, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError("covariance must be square")
    if np.max(np.abs(a - a.T), initial=0.0) > 1e-12 * max(1.0, np.max(np.abs(a), initial=0.0)):
        raise DomainError("covariance must be symmetric")
    a = 0.5 * (a + a.T)
    w, v = np.linalg.eigh(a)
    if w.size and w[0] < -PSD_CLIP_TOL:
        raise DomainError(f"covariance is indefinite (eigenvalue {w[0]:.3e})")
    if w.size and w[0] < 0:
        a = (v * np.clip(w, 0.0, None)) @ v.T
    n = a.shape[0]
    scale = max(np.max(np.abs(np.diag(a)), initial=0.0), 1e-300)
    L = np.zeros_like(a)
    for j in range(n):
        d = a[j, j] - L[j, :j] @ L[j, :j]
        if d <= 1e-14 * scale:
            continue
        L[j, j] = np.sqrt(d)
        L[j + 1:, j] = (a[j + 1:, j] - L[j + 1:, :j] @ L[j, :j]) / L[j, j]
    return L


def _path_factors(config: NoiseConfiguration, grid) -> np.ndarray:
    """Cholesky factors of the phase covariance per qubit, shape ``(3, K, K)``."""
    cache = {}
    out = []
    for k in config.kernels:
        if k not in cache:
            cache[k] = cholesky(phase_covariance_grid(k, grid))
        out.append(cache[k])
    return np.stack(out)


def _check_grid(grid) -> np.ndarray:
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    if grid.ndim != 1 or grid.size == 0 or grid[0] < 0 or np.any(np.diff(grid) <= 0):
        raise DomainError("grid must be non-empty, strictly ascending, starting at tau >= 0")
    return grid


def sample_phase_paths(seed: int, index: int, config: NoiseConfiguration, grid, factors=None) -> TrajectorySample:
    """Correlated phases ``Phi_q(t_k)`` over a grid for one trajectory."""
    grid = _check_grid(grid)
    L = _path_factors(config, grid) if factors is None else factors
    z = _trajectory_normals(seed, index, grid.size)  # (K, 3)
    return TrajectorySample(phases=np.einsum("qkj,jq->kq", L, z), grid=grid)


# --- ensemble average ----------------------------------------------------------


def _pairwise_sum(parts):
    parts = list(parts)
    while len(parts) > 1:
        nxt = [parts[i] + parts[i + 1] for i in range(0, len(parts) - 1, 2)]
        if len(parts) % 2:
            nxt.append(parts[-1])
        parts = nxt
    return parts[0]


def _evolve_batch(rho0, phases, global_phases) -> np.ndarray:
    """``U rho0 U^dagger`` for a batch; ``phases`` has shape ``(B, 3)``."""
    u = [batched_single_qubit_unitaries(phases[:, q], global_phase=global_phases[q]) for q in range(3)]
    big = np.einsum("bij,bkl,bmn->bikmjln", u[0], u[1], u[2]).reshape(-1, DIM, DIM)
    return big @ rho0 @ np.conj(np.swapaxes(big, 1, 2))


def _run_block(block, n_total, seed, mode, taus, sqrt_b, path_L, rho0, global_phases):
    start = block * BLOCK_SIZE
    size = min(BLOCK_SIZE, n_total - start)
    n_points = taus.size if mode is Mode.PATH else 1
    z = _block_normals(seed, block, n_points)[:, :size, :]
    s1 = np.empty((taus.size, DIM, DIM), dtype=complex)
    s2 = np.empty((taus.size, DIM, DIM), dtype=float)
    if mode is Mode.PATH:
        phases_all = np.einsum("qkj,jbq->kbq", path_L, z)
    for k in range(taus.size):
        phases = phases_all[k] if mode is Mode.PATH else sqrt_b[k] * z[0]
        rho_t = _evolve_batch(rho0, phases, global_phases[k])
        s1[k] = rho_t.sum(axis=0)
        s2[k] = (rho_t.real**2 + rho_t.imag**2).sum(axis=0)
    return s1, s2


def mc_rho(
    config: NoiseConfiguration,
    taus,
    r: float = 1.0,
    mc: McConfig = McConfig(),
    qubits: Sequence[QubitParams] = (QubitParams(),) * 3,
) -> McResult:
    """Ensemble-averaged state ``mean_i U_i rho0 U_i^dagger`` at each grid time.

    ``entry_stderr`` is the largest per-entry standard error of the mean;
    the per-entry values are kept in ``stderr_matrix``.
    """
    taus = _check_grid(taus)
    if len(qubits) != 3:
        raise DomainError("need parameters for three qubits")
    rho0 = ghz_density(r)
    n = int(mc.n_trajectories)
    sqrt_b = _sqrt_betas(config, taus)
    path_L = _path_factors(config, taus) if mc.mode is Mode.PATH else None
    lam_scale = np.array([q.lam for q in qubits])
    sqrt_b = sqrt_b * lam_scale
    if path_L is not None:
        path_L = path_L * lam_scale[:, None, None]
    global_phases = np.exp(-1j * np.outer(taus, [q.epsilon for q in qubits]))  # (K, 3)
    n_blocks = -(-n // BLOCK_SIZE)
    args = (n, mc.seed, mc.mode, taus, sqrt_b, path_L, rho0, global_phases)
    if mc.workers > 1 and n_blocks > 1:
        with ThreadPoolExecutor(max_workers=mc.workers) as pool:
            parts = list(pool.map(lambda b: _run_block(b, *args), range(n_blocks)))
    else:
        parts = [_run_block(b, *args) for b in range(n_blocks)]
    s1 = _pairwise_sum(p[0] for p in parts)
    s2 = _pairwise_sum(p[1] for p in parts)
    mean = s1 / n
    mean = 0.5 * (mean + np.conj(np.swapaxes(mean, 1, 2)))
    var = np.clip((s2 - n * np.abs(mean) ** 2) / (n - 1), 0.0, None)
    se = np.sqrt(var / n)
    result = McResult(taus=taus, rho_mean=mean, stderr_matrix=se, n_trajectories=n)
    result.measures = [
        measure_set(mean[k], tau=taus[k], stderr=float(result.entry_stderr[k])) for k in range(taus.size)
    ]
    return result


def compare(analytic, mc: McResult, index: int = 0, threshold: float = Z_THRESHOLD) -> CompareReport:
    """Largest per-entry z-score of ``analytic`` against the MC estimate at grid point ``index``."""
    analytic = np.asarray(analytic, dtype=complex)
    est = mc.rho_mean[index]
    se = mc.stderr_matrix[index]
    if analytic.shape != est.shape:
        raise DomainError(f"shape mismatch {analytic.shape} vs {est.shape}")
    dev = np.abs(analytic - est)
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(se > 0, dev / np.where(se > 0, se, 1.0), np.where(dev <= 1e-12, 0.0, np.inf))
    return CompareReport(
        max_abs_deviation=float(dev.max()),
        stderr=float(se.max()),
        z_score=float(z.max()),
        threshold=threshold,
    )
