"""Assembly of the total Hamiltonian, effective environment Hamiltonians and
the perturbation operator.

Basis convention (fixed throughout the package): the full system lives on a
2N-dimensional space indexed as ``(alpha - 1) * N + k`` with qubit level
``alpha`` in {1, 2} and environment index ``k`` in 0..N-1.  The first N
components belong to level 1, the last N to level 2.

Seed layout: a model seed is expanded via ``SeedSequence(seed).spawn(3)`` into
three independent streams, consumed in order by the environment Hamiltonian,
the interaction Hamiltonian, and the random initial environment state.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidDimensionError, InvalidLabelError
from .sampling import GOE_CONVENTIONS, Seed, SymmetricOperator, sample_goe


@dataclass(frozen=True)
class QubitSystem:
    """Two-level system Hamiltonian: H_S = diag(e1, e2) in its own eigenbasis."""

    e1: float = -0.5
    e2: float = 0.5

    @property
    def gap(self) -> float:
        return self.e2 - self.e1

    def energy(self, alpha: int) -> float:
        _check_label(alpha)
        return self.e1 if alpha == 1 else self.e2


@dataclass(frozen=True)
class ModelConfig:
    env_dim: int
    epsilon: float
    seed: int
    hbar: float = 1.0
    convention: str = "literal-paper"
    offdiag_coupling_scale: float = 1.0
    e1: float = -0.5
    e2: float = 0.5

    def __post_init__(self):
        if not isinstance(self.env_dim, (int, np.integer)) or self.env_dim < 1:
            raise InvalidDimensionError(f"env_dim must be a positive integer, got {self.env_dim}")
        if self.epsilon < 0:
            raise ValueError(f"epsilon must be non-negative, got {self.epsilon}")
        if self.hbar <= 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        if self.convention not in GOE_CONVENTIONS:
            raise ValueError(f"unknown convention {self.convention!r}")
        if not 0.0 <= self.offdiag_coupling_scale <= 1.0:
            raise ValueError(
                f"offdiag_coupling_scale must lie in [0, 1], got {self.offdiag_coupling_scale}"
            )


def seed_streams(seed: Seed) -> tuple[np.random.SeedSequence, ...]:
    """(environment, interaction, initial-state) child seed streams."""
    root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return tuple(root.spawn(3))


def _check_label(alpha: int) -> None:
    if alpha not in (1, 2):
        raise InvalidLabelError(f"qubit label must be 1 or 2, got {alpha}")


@dataclass(frozen=True)
class InteractionOperator:
    """2N x 2N symmetric coupling matrix with block access by qubit labels.

    The off-diagonal blocks carry the ``offdiag_scale`` factor already; the
    diagonal blocks are untouched.
    """

    matrix: SymmetricOperator
    env_dim: int
    offdiag_scale: float = 1.0

    def block(self, alpha: int, alpha_prime: int) -> np.ndarray:
        _check_label(alpha)
        _check_label(alpha_prime)
        n = self.env_dim
        rows = slice((alpha - 1) * n, alpha * n)
        cols = slice((alpha_prime - 1) * n, alpha_prime * n)
        return self.matrix.entries[rows, cols]

    @classmethod
    def from_symmetric(cls, raw: SymmetricOperator, env_dim: int, offdiag_scale: float = 1.0):
        if raw.dim != 2 * env_dim:
            raise InvalidDimensionError(
                f"interaction matrix dim {raw.dim} does not match 2*env_dim {2 * env_dim}"
            )
        m = raw.entries.copy()
        m[:env_dim, env_dim:] *= offdiag_scale
        m[env_dim:, :env_dim] *= offdiag_scale
        return cls(SymmetricOperator(m), env_dim, offdiag_scale)


@dataclass(frozen=True)
class EffectiveEnvHamiltonian:
    """Environment Hamiltonian seen by branch alpha: epsilon * H_I(alpha,alpha) + H_E."""

    alpha: int
    operator: SymmetricOperator


@dataclass(frozen=True)
class PerturbationOperator:
    """Difference of the two diagonal coupling blocks, block(2,2) - block(1,1)."""

    operator: SymmetricOperator


@dataclass(frozen=True)
class Model:
    config: ModelConfig
    qubit: QubitSystem
    h_env: SymmetricOperator
    h_int: InteractionOperator
    h_total: SymmetricOperator
    state_seed: np.random.SeedSequence = field(repr=False, default=None)

    @property
    def env_dim(self) -> int:
        return self.config.env_dim


def assemble_total(
    qubit: QubitSystem,
    h_env: SymmetricOperator,
    h_int: InteractionOperator,
    epsilon: float,
) -> SymmetricOperator:
    """H = H_S (x) 1 + epsilon*H_I + 1 (x) H_E on the 2N-dimensional space."""
    n = h_env.dim
    if h_int.env_dim != n:
        raise InvalidDimensionError(
            f"interaction env_dim {h_int.env_dim} does not match environment dim {n}"
        )
    h = np.kron(np.diag([qubit.e1, qubit.e2]), np.eye(n))
    h += np.kron(np.eye(2), h_env.entries)
    h += epsilon * h_int.matrix.entries
    return SymmetricOperator(h)


def build_model(config: ModelConfig) -> Model:
    """Sample H_E and H_I from the configured ensemble and assemble the model."""
    env_seed, int_seed, state_seed = seed_streams(config.seed)
    qubit = QubitSystem(config.e1, config.e2)
    h_env = sample_goe(config.env_dim, env_seed, config.convention)
    raw_int = sample_goe(2 * config.env_dim, int_seed, config.convention)
    h_int = InteractionOperator.from_symmetric(
        raw_int, config.env_dim, config.offdiag_coupling_scale
    )
    h_total = assemble_total(qubit, h_env, h_int, config.epsilon)
    return Model(config, qubit, h_env, h_int, h_total, state_seed)


def interaction_block(h_int: InteractionOperator, alpha: int, alpha_prime: int) -> np.ndarray:
    """N x N block <alpha k|H_I|alpha' k'>; symmetric when alpha == alpha_prime."""
    return h_int.block(alpha, alpha_prime)


def effective_env_hamiltonian(model: Model, alpha: int) -> EffectiveEnvHamiltonian:
    """Branch Hamiltonian epsilon * H_I(alpha) + H_E driving the environment."""
    _check_label(alpha)
    op = model.config.epsilon * model.h_int.block(alpha, alpha) + model.h_env.entries
    return EffectiveEnvHamiltonian(alpha, SymmetricOperator(op))


def perturbation_v(model: Model) -> PerturbationOperator:
    """V = H_I(2,2) - H_I(1,1), the perturbation whose fidelity decay sets tau_d."""
    v = model.h_int.block(2, 2) - model.h_int.block(1, 1)
    return PerturbationOperator(SymmetricOperator(v))
