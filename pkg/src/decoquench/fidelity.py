"""Environment fidelity amplitude and the first-order coherence prediction.

The overlap between the two branch evolutions of the same initial environment
state,

    f(t) = <phi0| exp(+i t (H_eff + eps V) / hbar) exp(-i t H_eff / hbar) |phi0>,

is computed from two exact spectral decompositions, not from perturbation
theory: the only approximation it inherits is the neglect of population
leakage between the branches, and ``compare_exact`` quantifies exactly that
by running the full 2N-dimensional evolution next to the prediction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError
from .model import EffectiveEnvHamiltonian, Model, PerturbationOperator, effective_env_hamiltonian, perturbation_v
from .propagator import TimeGrid, diagonalize, evolve_series, reduced_density
from .sampling import SymmetricOperator
from .theory import fgr_relaxation

# Operationalizes "t much less than tau_E": the window of the comparison grid
# on which the first-order prediction is held against the exact evolution.
DEFAULT_VALIDITY_FRACTION = 0.1


@dataclass(frozen=True)
class FidelitySeries:
    """f_{beta alpha}(t) on a time grid, for the branch pair (alpha, beta)."""

    times: np.ndarray
    values: np.ndarray
    alpha: int = 1
    beta: int = 2


@dataclass(frozen=True)
class ExactComparison:
    times: np.ndarray
    exact_rho12: np.ndarray
    predicted_rho12: np.ndarray
    max_abs_deviation: float
    window_t_max: float

    @property
    def exact_abs(self) -> np.ndarray:
        return np.abs(self.exact_rho12)

    @property
    def predicted_abs(self) -> np.ndarray:
        return np.abs(self.predicted_rho12)


def fidelity_series(
    h_eff_alpha: EffectiveEnvHamiltonian,
    v: PerturbationOperator,
    epsilon: float,
    phi0: np.ndarray,
    grid: TimeGrid,
    hbar: float = 1.0,
) -> FidelitySeries:
    """Overlap of the two branch evolutions of phi0 at every grid time."""
    h_a = h_eff_alpha.operator.entries
    if phi0.shape[0] != h_a.shape[0]:
        raise DimensionMismatchError(
            f"state dim {phi0.shape[0]} does not match Hamiltonian dim {h_a.shape[0]}"
        )
    if v.operator.dim != h_a.shape[0]:
        raise DimensionMismatchError(
            f"perturbation dim {v.operator.dim} does not match Hamiltonian dim {h_a.shape[0]}"
        )
    h_b = SymmetricOperator(h_a + epsilon * v.operator.entries)
    times = grid.times
    branch_a = evolve_series(diagonalize(h_a), phi0, times, hbar)
    branch_b = evolve_series(diagonalize(h_b), phi0, times, hbar)
    values = np.sum(branch_b.conj() * branch_a, axis=1)
    alpha = h_eff_alpha.alpha
    beta = 2 if alpha == 1 else 1
    return FidelitySeries(times=times, values=values, alpha=alpha, beta=beta)


def offdiag_prediction(
    c: tuple[complex, complex],
    energies: tuple[float, float],
    f: FidelitySeries,
    hbar: float = 1.0,
) -> np.ndarray:
    """First-order coherence: rho12(t) = exp(-i (E1 - E2) t / hbar) C1 C2* f21(t)."""
    c1, c2 = complex(c[0]), complex(c[1])
    norm = abs(c1) ** 2 + abs(c2) ** 2
    if abs(norm - 1.0) > 1e-10:
        raise ValueError(f"superposition coefficients not normalized: |C|^2 = {norm}")
    e1, e2 = energies
    return np.exp(-1j * (e1 - e2) * f.times / hbar) * c1 * np.conj(c2) * f.values


def compare_exact(
    model: Model,
    psi_s0: tuple[complex, complex],
    phi0: np.ndarray,
    grid: TimeGrid,
    validity_fraction: float = DEFAULT_VALIDITY_FRACTION,
) -> ExactComparison:
    """Exact full-system coherence next to the first-order prediction.

    The deviation is reported on the sub-grid t <= validity_fraction * tau_E
    (golden rule); if the grid ends earlier the whole grid is used.
    """
    n = model.env_dim
    if phi0.shape[0] != n:
        raise DimensionMismatchError(
            f"environment state dim {phi0.shape[0]} does not match env_dim {n}"
        )
    hbar = model.config.hbar
    times = grid.times

    psi0 = np.kron(np.asarray(psi_s0, dtype=complex), phi0)
    full = diagonalize(model.h_total)
    states = evolve_series(full, psi0, times, hbar)
    exact = np.array([reduced_density(s, n)[0, 1] for s in states])

    f = fidelity_series(
        effective_env_hamiltonian(model, 1),
        perturbation_v(model),
        model.config.epsilon,
        phi0,
        grid,
        hbar,
    )
    predicted = offdiag_prediction(psi_s0, (model.qubit.e1, model.qubit.e2), f, hbar)

    fgr = fgr_relaxation(model)
    window_t_max = times[-1] if fgr.tau_e is None else min(times[-1], validity_fraction * fgr.tau_e)
    in_window = times <= window_t_max
    deviation = float(np.max(np.abs(exact[in_window] - predicted[in_window])))
    return ExactComparison(
        times=times,
        exact_rho12=exact,
        predicted_rho12=predicted,
        max_abs_deviation=deviation,
        window_t_max=float(window_t_max),
    )
