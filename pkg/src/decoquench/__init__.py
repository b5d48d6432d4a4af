"""Decoherence of a qubit coupled to a quantum-chaotic random-matrix environment.

Exact spectral simulation of the coupled system, the fidelity-amplitude
picture of coherence decay, closed-form timescale predictions (Gaussian and
golden-rule regimes, perturbative border), and a reproducible experiment
harness with CSV/JSON outputs.
"""

from .config import DEFAULT_SEED, ExperimentConfig, InitialSystem, SweepSpec, load_config, parse_config
from .fidelity import ExactComparison, FidelitySeries, compare_exact, fidelity_series, offdiag_prediction
from .model import (
    EffectiveEnvHamiltonian,
    InteractionOperator,
    Model,
    ModelConfig,
    PerturbationOperator,
    QubitSystem,
    build_model,
    effective_env_hamiltonian,
    interaction_block,
    perturbation_v,
)
from .propagator import (
    SpectralDecomposition,
    TimeGrid,
    diagonalize,
    evolve,
    evolve_series,
    leakage_norm,
    reduced_density,
)
from .sampling import GOE_CONVENTIONS, SymmetricOperator, sample_goe, sample_random_state
from .theory import (
    FgrEstimate,
    SpectralStatistics,
    TheoryPrediction,
    fgr_relaxation,
    gaussian_envelope,
    exponential_envelope,
    perturbative_border,
    spectral_statistics,
    tau_d,
)
from .timescales import DecaySeries, TauEFit, TauMeasurement, extract_tau_d, extract_tau_e

__version__ = "0.1.0"
