"""Model-free extraction of the decoherence and relaxation times from series.

tau_d is the first 1/e crossing of a decay series relative to its initial
value, linearly interpolated between the bracketing samples.  tau_e is the
reciprocal slope of a least-squares linear fit to the population over an
initial window.  Both return an explicit reason code instead of a value when
the series never supplies one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UndefinedBaselineError

REASON_NO_CROSSING = "no-crossing"
REASON_INSUFFICIENT_DECAY = "insufficient-decay"

# A fitted population drop smaller than this over the fit window is treated as
# numerically indistinguishable from a flat line.
MIN_FIT_DROP = 1e-9

DEFAULT_FIT_FRACTION = 0.2
POPULATION_DROP_CAP = 0.1


@dataclass(frozen=True)
class DecaySeries:
    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=np.float64)
        v = np.asarray(self.values, dtype=np.float64)
        if t.shape != v.shape or t.ndim != 1 or t.shape[0] == 0:
            raise ValueError(f"times {t.shape} and values {v.shape} must be equal-length 1-d arrays")
        if not np.all(np.isfinite(v)):
            raise ValueError("decay series contains non-finite values")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class TauMeasurement:
    value: float | None
    reason: str | None = None

    @property
    def ok(self) -> bool:
        return self.value is not None


@dataclass(frozen=True)
class TauEFit(TauMeasurement):
    fit_window: tuple[float, float] | None = None
    slope: float | None = None
    residual_rms: float | None = None


@dataclass(frozen=True)
class TimescaleReport:
    tau_d: TauMeasurement
    tau_e: TauEFit


def extract_tau_d(series: DecaySeries) -> TauMeasurement:
    """First time the series falls to 1/e of its initial value."""
    values = series.values
    v0 = values[0]
    if v0 <= 0.0:
        raise UndefinedBaselineError(f"series starts at {v0}; 1/e crossing undefined")
    target = v0 / math.e
    below = np.nonzero(values <= target)[0]
    if below.size == 0:
        return TauMeasurement(None, REASON_NO_CROSSING)
    i = int(below[0])
    t_hi, v_hi = series.times[i], values[i]
    t_lo, v_lo = series.times[i - 1], values[i - 1]
    if v_lo == v_hi:
        return TauMeasurement(float(t_hi))
    frac = (v_lo - target) / (v_lo - v_hi)
    return TauMeasurement(float(t_lo + frac * (t_hi - t_lo)))


def extract_tau_e(
    population: DecaySeries,
    fit_fraction: float = DEFAULT_FIT_FRACTION,
    drop_cap: float = POPULATION_DROP_CAP,
) -> TauEFit:
    """Reciprocal of the initial population slope.

    The fit window [0, t_w] ends at the earlier of fit_fraction * t_max and
    the first time the population has dropped by drop_cap from its start,
    which keeps the fit inside the linear golden-rule regime.
    """
    if not 0.0 < fit_fraction <= 1.0:
        raise ValueError(f"fit_fraction must lie in (0, 1], got {fit_fraction}")
    t = population.times
    p = population.values
    t_w = fit_fraction * t[-1]
    dropped = np.nonzero(p <= p[0] - drop_cap)[0]
    if dropped.size > 0:
        t_w = min(t_w, float(t[int(dropped[0])]))
    mask = t <= t_w
    if int(np.sum(mask)) < 3:
        raise ValueError(f"fewer than 3 samples in fit window [0, {t_w:g}]")
    tw_t, tw_p = t[mask], p[mask]
    slope, intercept = np.polyfit(tw_t, tw_p, 1)
    residual = tw_p - (slope * tw_t + intercept)
    rms = float(np.sqrt(np.mean(residual**2)))
    window = (0.0, float(tw_t[-1]))
    if abs(slope) * tw_t[-1] < MIN_FIT_DROP:
        return TauEFit(None, REASON_INSUFFICIENT_DECAY, window, float(slope), rms)
    return TauEFit(float(1.0 / abs(slope)), None, window, float(slope), rms)
