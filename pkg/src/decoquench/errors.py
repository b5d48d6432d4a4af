"""Exception types shared across the package."""


class InvalidDimensionError(ValueError):
    """Requested matrix/state dimension is not a positive integer."""


class InvalidLabelError(ValueError):
    """Qubit level label outside {1, 2}."""


class DimensionMismatchError(ValueError):
    """Operands of an operation have incompatible dimensions."""


class DiagonalizationError(RuntimeError):
    """Symmetric eigensolver failed; message carries dimension and residual."""


class InsufficientSpectrumError(ValueError):
    """Spectral statistics need at least two levels in the window."""


class BorderUndefinedError(ValueError):
    """Perturbative border is undefined (off-diagonal perturbation vanishes)."""


class NoDecoherencePredictedError(ValueError):
    """Perturbation acts trivially: no Gaussian nor exponential decay channel."""


class UndefinedBaselineError(ValueError):
    """Decay series starts at zero; 1/e crossing has no baseline."""


class ConfigError(ValueError):
    """Invalid experiment configuration; message names the offending field."""
