"""Seeded sampling of GOE-style real symmetric matrices and random pure states.

All randomness in the package flows through numpy's PCG64 generator
(``np.random.default_rng``).  A seed plus an identical request sequence gives
bit-identical output on any platform, which is what makes the experiment
outputs reproducible byte for byte.

Two normalization conventions are supported for the symmetric ensembles:

* ``"literal-paper"``: every independent entry (diagonal included) is
  Gaussian with mean 0 and variance 1.
* ``"standard-goe"``: off-diagonal variance 1, diagonal variance 2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidDimensionError

GOE_CONVENTIONS = ("literal-paper", "standard-goe")

# Seeds are plain unsigned integers; SeedSequence is accepted too so the model
# builder can hand out independent child streams.
Seed = int | np.random.SeedSequence


@dataclass(frozen=True)
class SymmetricOperator:
    """Dense real symmetric matrix; symmetry is enforced exactly at construction."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise InvalidDimensionError(f"expected a square matrix, got shape {m.shape}")
        if not np.array_equal(m, m.T):
            raise ValueError("matrix is not exactly symmetric")
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, (int, np.integer)):
        if seed < 0:
            raise ValueError(f"seed must be a non-negative integer, got {seed}")
        return np.random.default_rng(int(seed))
    return np.random.default_rng(seed)


def sample_goe(dim: int, seed, convention: str = "literal-paper") -> SymmetricOperator:
    """Draw a dim x dim real symmetric Gaussian matrix.

    Independent entries live on the diagonal and upper triangle; the lower
    triangle mirrors the upper one, so the result is exactly symmetric.
    Variances follow the requested convention.
    """
    if not isinstance(dim, (int, np.integer)) or dim < 1:
        raise InvalidDimensionError(f"dim must be a positive integer, got {dim}")
    if convention not in GOE_CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}, expected one of {GOE_CONVENTIONS}")
    rng = _rng(seed)
    raw = rng.standard_normal((dim, dim))
    upper = np.triu(raw, 1)
    m = upper + upper.T
    diag = raw.diagonal().copy()
    if convention == "standard-goe":
        diag *= np.sqrt(2.0)
    m[np.diag_indices(dim)] = diag
    return SymmetricOperator(m)


def sample_random_state(dim: int, seed) -> np.ndarray:
    """Haar-uniform random pure state: i.i.d. complex Gaussian components, normalized."""
    if not isinstance(dim, (int, np.integer)) or dim < 1:
        raise InvalidDimensionError(f"dim must be a positive integer, got {dim}")
    rng = _rng(seed)
    re = rng.standard_normal(dim)
    im = rng.standard_normal(dim)
    v = re + 1j * im
    return v / np.linalg.norm(v)
