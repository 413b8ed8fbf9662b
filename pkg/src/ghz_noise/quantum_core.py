"""Dense linear algebra for three-qubit states.

Matrices are plain complex ``numpy`` arrays.  Qubit 0 is the most
significant bit of the computational-basis index, so ``|001>`` is index 1
and the flip of qubit 2.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError

N_QUBITS = 3
DIM = 2**N_QUBITS
MAX_KRON_DIM = 2**10

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
UNITARY_TOL = 1e-10

JACOBI_MAX_SWEEPS = 50
JACOBI_MAX_DIM = 16

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True)
class QubitParams:
    """Energy splitting ``epsilon`` and coupling ``lam`` of one qubit."""

    epsilon: float = 0.0
    lam: float = 1.0

    def __post_init__(self):
        if self.lam == 0:
            raise DomainError("coupling lam must be non-zero")


def kron(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != 2 or b.ndim != 2:
        raise DomainError("kron expects two matrices")
    rows, cols = a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]
    if rows > MAX_KRON_DIM or cols > MAX_KRON_DIM:
        raise DomainError(f"kron result {rows}x{cols} exceeds {MAX_KRON_DIM}")
    return np.kron(a, b)


def kron_all(*mats) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for m in mats:
        out = kron(out, m)
    return out


def basis_state(bits: str) -> np.ndarray:
    """Computational basis ket for a bit string such as ``"010"``."""
    vec = np.zeros(2 ** len(bits), dtype=complex)
    vec[int(bits, 2)] = 1.0
    return vec


def ghz_vector() -> np.ndarray:
    return (basis_state("000") + basis_state("111")) / np.sqrt(2.0)


def ghz_projector() -> np.ndarray:
    psi = ghz_vector()
    return np.outer(psi, psi.conj())


def ghz_density(r: float = 1.0) -> np.ndarray:
    """Werner-like mixture ``(1 - r) I/8 + r |GHZ><GHZ|``."""
    if not (0.0 <= r <= 1.0):
        raise DomainError(f"mixedness r must lie in [0, 1], got {r!r}")
    return (1.0 - r) * np.eye(DIM, dtype=complex) / DIM + r * ghz_projector()


def validate_density(rho, psd_tol: float = PSD_TOL) -> np.ndarray:
    """Return ``rho`` as an array after checking Hermiticity, trace and positivity."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DomainError(f"density matrix must be square, got shape {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise DomainError("density matrix has non-finite entries")
    if np.max(np.abs(rho - rho.conj().T)) > HERMITIAN_TOL:
        raise DomainError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > TRACE_TOL:
        raise DomainError(f"density matrix trace {np.trace(rho).real!r} != 1")
    evals, _ = hermitian_eigen(rho)
    if evals[0] < -psd_tol:
        raise DomainError(f"density matrix has eigenvalue {evals[0]!r} < -{psd_tol}")
    return rho


def is_unitary(u, tol: float = UNITARY_TOL) -> bool:
    u = np.asarray(u, dtype=complex)
    return u.ndim == 2 and u.shape[0] == u.shape[1] and np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))) <= tol


def single_qubit_unitary(params: QubitParams, phase: float, tau: float) -> np.ndarray:
    """``exp(-i eps tau) [cos(lam phase) I - i sin(lam phase) sigma_x]``.

    ``phase`` is the accumulated noise phase up to ``tau``; the fixed
    ``sigma_x`` direction makes the time-ordered exponential a plain one.
    """
    theta = params.lam * phase
    glob = np.exp(-1j * params.epsilon * tau)
    return glob * (np.cos(theta) * I2 - 1j * np.sin(theta) * SIGMA_X)


def batched_single_qubit_unitaries(phases, lam: float = 1.0, global_phase=1.0) -> np.ndarray:
    """Stack of ``exp(-i lam phase sigma_x)`` for an array of phases, shape ``(..., 2, 2)``."""
    theta = lam * np.asarray(phases, dtype=float)
    c = np.cos(theta)
    s = -1j * np.sin(theta)
    out = np.empty(theta.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = c
    out[..., 1, 1] = c
    out[..., 0, 1] = s
    out[..., 1, 0] = s
    return out * np.asarray(global_phase)[..., None, None]


def evolve(rho, u) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u):
        raise DomainError("evolve requires a unitary operator")
    rho = np.asarray(rho, dtype=complex)
    return u @ rho @ u.conj().T


def _embed_single(op, qubit: int, n_qubits: int) -> np.ndarray:
    mats = [I2] * n_qubits
    mats[qubit] = op
    return kron_all(*mats)


def apply_bitflip_channel(rho, qubit_index: int, p: float) -> np.ndarray:
    """``rho -> (1 - p) rho + p X_k rho X_k`` on one qubit."""
    if not (0.0 <= p <= 0.5):
        raise DomainError(f"flip probability must lie in [0, 1/2], got {p!r}")
    rho = np.asarray(rho, dtype=complex)
    n_qubits = int(round(np.log2(rho.shape[0])))
    if not (0 <= qubit_index < n_qubits):
        raise DomainError(f"qubit index {qubit_index} out of range")
    x = _embed_single(SIGMA_X, qubit_index, n_qubits)
    return (1.0 - p) * rho + p * (x @ rho @ x)


def hermitian_eigen(m, tol: float = 1e-15, max_sweeps: int = JACOBI_MAX_SWEEPS):
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns ascending real eigenvalues and a unitary whose columns are the
    matching eigenvectors.
    """
    a = np.array(m, dtype=complex)
    n = a.shape[0]
    if a.ndim != 2 or a.shape[1] != n:
        raise DomainError("hermitian_eigen expects a square matrix")
    if n > JACOBI_MAX_DIM:
        raise DomainError(f"dimension {n} exceeds {JACOBI_MAX_DIM}")
    scale = max(np.max(np.abs(a)), 1.0) if n else 1.0
    if np.max(np.abs(a - a.conj().T), initial=0.0) > 1e-10 * scale:
        raise DomainError("matrix is not Hermitian")
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=complex)

    off_mask = ~np.eye(n, dtype=bool)

    def off_norm():
        return np.sqrt(np.sum(np.abs(a[off_mask]) ** 2))

    for _ in range(max_sweeps):
        if off_norm() <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= 1e-300:
                    continue
                phase = apq / mag
                # rotation zeroing the real symmetric 2x2 problem after
                # removing the phase of a[p, q]
                theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = np.copysign(1.0, theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # dense 2-plane rotation; at n <= 16 this beats fancy indexing
                rot = np.eye(n, dtype=complex)
                rot[p, p] = c
                rot[q, q] = c
                rot[p, q] = s * phase
                rot[q, p] = -s * np.conj(phase)
                a = rot.conj().T @ a @ rot
                a[p, q] = a[q, p] = 0.0
                v = v @ rot
    else:
        if off_norm() > tol * scale:
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")
    evals = np.real(np.diag(a))
    order = np.argsort(evals, kind="stable")
    return evals[order], v[:, order]
