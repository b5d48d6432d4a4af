"""Exact spectral time evolution and qubit reduction.

The whole-system propagator is built once from a full symmetric
diagonalization; evaluating the state at any time is then a dense
matrix-vector product, unitary to machine precision.  Decompositions are
immutable and safe to share between workers; evaluations at distinct times
are independent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DiagonalizationError, DimensionMismatchError, InvalidLabelError
from .sampling import SymmetricOperator


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (ascending) and orthonormal eigenvector columns of a symmetric matrix."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid of n_steps samples on [0, t_max], first sample at 0."""

    t_max: float
    n_steps: int

    def __post_init__(self):
        if self.t_max <= 0:
            raise ValueError(f"t_max must be positive, got {self.t_max}")
        if self.n_steps < 2:
            raise ValueError(f"n_steps must be at least 2, got {self.n_steps}")

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.n_steps)


def diagonalize(operator: SymmetricOperator | np.ndarray) -> SpectralDecomposition:
    """Full symmetric eigendecomposition (LAPACK); eigenvalues come out ascending."""
    m = operator.entries if isinstance(operator, SymmetricOperator) else np.asarray(operator)
    try:
        w, q = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        residual = float(np.max(np.abs(m - m.T))) if m.ndim == 2 else float("nan")
        raise DiagonalizationError(
            f"eigensolver failed for dim={m.shape[0]} (max asymmetry {residual:.3e}): {exc}"
        ) from exc
    return SpectralDecomposition(w, q)


def evolve(decomp: SpectralDecomposition, psi0: np.ndarray, t: float, hbar: float = 1.0) -> np.ndarray:
    """psi(t) = sum_k exp(-i lambda_k t / hbar) <k|psi0> |k>."""
    if psi0.shape[0] != decomp.dim:
        raise DimensionMismatchError(
            f"state dim {psi0.shape[0]} does not match operator dim {decomp.dim}"
        )
    coeff = decomp.eigenvectors.T @ psi0
    phases = np.exp(-1j * decomp.eigenvalues * (t / hbar))
    return decomp.eigenvectors @ (phases * coeff)


def evolve_series(
    decomp: SpectralDecomposition, psi0: np.ndarray, times: np.ndarray, hbar: float = 1.0
) -> np.ndarray:
    """States at every grid time, stacked as rows (len(times), dim)."""
    if psi0.shape[0] != decomp.dim:
        raise DimensionMismatchError(
            f"state dim {psi0.shape[0]} does not match operator dim {decomp.dim}"
        )
    coeff = decomp.eigenvectors.T @ psi0
    phases = np.exp(np.outer(np.asarray(times) / hbar, -1j * decomp.eigenvalues))
    return (phases * coeff) @ decomp.eigenvectors.T


def reduced_density(psi: np.ndarray, env_dim: int) -> np.ndarray:
    """Trace out the environment: rho[a, b] = sum_k psi[(a,k)] conj(psi[(b,k)])."""
    if psi.shape[0] != 2 * env_dim:
        raise DimensionMismatchError(
            f"state dim {psi.shape[0]} is not twice the environment dim {env_dim}"
        )
    branches = psi.reshape(2, env_dim)
    return branches @ branches.conj().T


def leakage_norm(psi: np.ndarray, alpha: int, env_dim: int) -> float:
    """Squared norm of the component outside branch alpha."""
    if alpha not in (1, 2):
        raise InvalidLabelError(f"qubit label must be 1 or 2, got {alpha}")
    if psi.shape[0] != 2 * env_dim:
        raise DimensionMismatchError(
            f"state dim {psi.shape[0]} is not twice the environment dim {env_dim}"
        )
    other = slice(env_dim, 2 * env_dim) if alpha == 1 else slice(0, env_dim)
    return float(np.sum(np.abs(psi[other]) ** 2))
