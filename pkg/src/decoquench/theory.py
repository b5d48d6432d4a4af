"""Closed-form predictions for the decoherence and relaxation timescales.

Everything here is derived from spectral statistics of the effective
environment Hamiltonian and of the perturbation operator in its eigenbasis:
the perturbative border separating Gaussian from exponential fidelity decay,
the two decay envelopes with their 1/e times, and the golden-rule relaxation
rate.  Statistics are taken over the central part of the spectrum (bulk
levels; spectral edges distort spacings), 50% by default.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BorderUndefinedError,
    InsufficientSpectrumError,
    NoDecoherencePredictedError,
)
from .model import EffectiveEnvHamiltonian, Model, PerturbationOperator
from .propagator import diagonalize

DEFAULT_WINDOW_FRACTION = 0.5


@dataclass(frozen=True)
class SpectralStatistics:
    """Bulk statistics of the perturbation in the environment eigenbasis.

    sigma_v:  standard deviation of the diagonal elements <n|V|n>.
    v_nd_sq:  mean of |<n|V|n'>|^2 over distinct pairs in the window.
    delta:    mean consecutive level spacing in the window.
    """

    sigma_v: float
    v_nd_sq: float
    delta: float
    window_fraction: float
    window_size: int
    window_span: tuple[float, float]

    @property
    def window(self) -> str:
        lo, hi = self.window_span
        return (
            f"central {self.window_fraction:.0%} of the spectrum "
            f"({self.window_size} levels, energies [{lo:.4g}, {hi:.4g}])"
        )


@dataclass(frozen=True)
class TheoryPrediction:
    epsilon_p: float
    gamma: float
    tau_d_gauss: float
    tau_d_exp: float
    regime: str  # "below-border" or "above-border"


@dataclass(frozen=True)
class FgrEstimate:
    """Golden-rule relaxation: rate = 2 pi eps^2 dos <H_I,nd^2> / hbar."""

    dos: float
    h_i_nd_sq: float
    rate: float
    tau_e: float | None  # None when the rate vanishes (eps = 0)


def _window_indices(n: int, window_fraction: float) -> slice:
    if not 0.0 < window_fraction <= 1.0:
        raise ValueError(f"window_fraction must lie in (0, 1], got {window_fraction}")
    size = max(2, round(n * window_fraction))
    size = min(size, n)
    start = (n - size) // 2
    return slice(start, start + size)


def spectral_statistics(
    h_eff: EffectiveEnvHamiltonian | np.ndarray,
    v: PerturbationOperator | np.ndarray,
    window_fraction: float = DEFAULT_WINDOW_FRACTION,
) -> SpectralStatistics:
    """Diagonalize the branch Hamiltonian and measure V in its eigenbasis."""
    h = h_eff.operator.entries if isinstance(h_eff, EffectiveEnvHamiltonian) else np.asarray(h_eff)
    vm = v.operator.entries if isinstance(v, PerturbationOperator) else np.asarray(v)
    n = h.shape[0]
    if n < 2:
        raise InsufficientSpectrumError(f"need at least 2 levels, got dim {n}")
    decomp = diagonalize(h)
    win = _window_indices(n, window_fraction)
    q = decomp.eigenvectors[:, win]
    v_eig = q.T @ vm @ q
    diag = np.diag(v_eig)
    size = diag.shape[0]
    off_mask = ~np.eye(size, dtype=bool)
    sigma_v = float(np.std(diag, ddof=1))
    v_nd_sq = float(np.mean(v_eig[off_mask] ** 2))
    levels = decomp.eigenvalues[win]
    delta = float((levels[-1] - levels[0]) / (size - 1))
    return SpectralStatistics(
        sigma_v=sigma_v,
        v_nd_sq=v_nd_sq,
        delta=delta,
        window_fraction=window_fraction,
        window_size=size,
        window_span=(float(levels[0]), float(levels[-1])),
    )


def perturbative_border(stats: SpectralStatistics) -> float:
    """eps_p = sigma_v * delta / (2 pi mean(V_nd^2))."""
    if stats.v_nd_sq == 0.0:
        raise BorderUndefinedError(
            "perturbation has no off-diagonal matrix elements; border undefined"
        )
    return stats.sigma_v * stats.delta / (2.0 * math.pi * stats.v_nd_sq)


def gaussian_envelope(epsilon: float, sigma_v: float, hbar: float, times: np.ndarray) -> np.ndarray:
    """|f(t)| below the border: exp(-eps^2 sigma_v^2 t^2 / 2 hbar^2)."""
    t = np.asarray(times, dtype=np.float64)
    return np.exp(-(epsilon**2) * (sigma_v**2) * t**2 / (2.0 * hbar**2))


def exponential_envelope(
    epsilon: float, v_nd_sq: float, delta: float, hbar: float, times: np.ndarray
) -> tuple[float, np.ndarray]:
    """|f(t)| above the border: exp(-Gamma t / 2 hbar), Gamma = 2 pi eps^2 V_nd^2 / delta."""
    if delta <= 0:
        raise ValueError(f"mean level spacing must be positive, got {delta}")
    gamma = 2.0 * math.pi * epsilon**2 * v_nd_sq / delta
    t = np.asarray(times, dtype=np.float64)
    return gamma, np.exp(-gamma * t / (2.0 * hbar))


def tau_d(epsilon: float, stats: SpectralStatistics, hbar: float = 1.0) -> TheoryPrediction:
    """Both 1/e-time branches plus the regime picked by comparing eps to the border."""
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if stats.sigma_v == 0.0 and stats.v_nd_sq == 0.0:
        raise NoDecoherencePredictedError("V acts trivially; no decoherence channel")
    eps_p = perturbative_border(stats) if stats.v_nd_sq > 0.0 else math.inf
    gamma = 2.0 * math.pi * epsilon**2 * stats.v_nd_sq / stats.delta
    t_gauss = math.sqrt(2.0) * hbar / (epsilon * stats.sigma_v) if stats.sigma_v > 0 else math.inf
    t_exp = hbar * stats.delta / (math.pi * epsilon**2 * stats.v_nd_sq) if stats.v_nd_sq > 0 else math.inf
    regime = "below-border" if epsilon < eps_p else "above-border"
    return TheoryPrediction(eps_p, gamma, t_gauss, t_exp, regime)


def fgr_relaxation(model: Model, window_fraction: float = DEFAULT_WINDOW_FRACTION) -> FgrEstimate:
    """Golden-rule estimate of the relaxation time of the qubit populations.

    The squared coupling is averaged over the level-changing block of H_I in
    the environment eigenbasis; the density of final states is the reciprocal
    mean level spacing of H_E over the central window.
    """
    n = model.env_dim
    if n < 2:
        raise InsufficientSpectrumError(f"need at least 2 environment levels, got {n}")
    env = diagonalize(model.h_env)
    win = _window_indices(n, window_fraction)
    levels = env.eigenvalues[win]
    span = float(levels[-1] - levels[0])
    if span <= 0.0:
        raise InsufficientSpectrumError("degenerate environment spectrum; density of states undefined")
    delta_env = span / (levels.shape[0] - 1)
    dos = 1.0 / delta_env
    block = model.h_int.block(2, 1)
    rotated = env.eigenvectors.T @ block @ env.eigenvectors
    h_i_nd_sq = float(np.mean(rotated**2))
    eps = model.config.epsilon
    rate = 2.0 * math.pi * eps**2 * dos * h_i_nd_sq / model.config.hbar
    tau_e = 1.0 / rate if rate > 0.0 else None
    return FgrEstimate(dos=dos, h_i_nd_sq=h_i_nd_sq, rate=rate, tau_e=tau_e)
