"""Experiment configuration: JSON schema, defaults, strict validation.

Configs mirror the run records: every field has a default, unknown keys are
rejected, and every validation error names the offending field with its
dotted path so CLI users see exactly what to fix.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .model import ModelConfig
from .sampling import GOE_CONVENTIONS

DEFAULT_SEED = 137
DEFAULT_ENV_DIM = 200
DEFAULT_EPSILON = 5e-4
DEFAULT_N_STEPS = 1000

SWEEP_EPSILON_MIN = 2e-4
SWEEP_EPSILON_MAX = 0.3
SWEEP_COUNT = 12
SWEEP_SEEDS_PER_POINT = 4
RESAMPLE_POLICIES = ("fixed-matrices", "fresh-per-epsilon")

EIGENSTATE_KINDS = ("eigenstate-1", "eigenstate-2")


@dataclass(frozen=True)
class InitialSystem:
    """Initial qubit state: a bare eigenstate or a normalized superposition."""

    kind: str
    c1: complex = complex(1 / math.sqrt(2))
    c2: complex = complex(1 / math.sqrt(2))

    def __post_init__(self):
        norm = abs(self.c1) ** 2 + abs(self.c2) ** 2
        if abs(norm - 1.0) > 1e-10:
            raise ConfigError(f"initial_system: coefficients not normalized, |C|^2 = {norm}")

    @property
    def population_alpha(self) -> int:
        """Branch label for the population (eigenstate-start) run."""
        return 1 if self.kind == "eigenstate-1" else 2

    @property
    def coefficients(self) -> tuple[complex, complex]:
        return (self.c1, self.c2)


@dataclass(frozen=True)
class SweepSpec:
    epsilons: tuple[float, ...]
    resample: str = "fixed-matrices"
    seeds_per_point: int = SWEEP_SEEDS_PER_POINT

    def __post_init__(self):
        eps = self.epsilons
        if len(eps) < 2:
            raise ConfigError("sweep.epsilons: need at least two coupling values")
        if any(e <= 0 for e in eps):
            raise ConfigError("sweep.epsilons: all values must be positive")
        if any(b <= a for a, b in zip(eps, eps[1:])):
            raise ConfigError("sweep.epsilons: values must be strictly ascending")
        if self.resample not in RESAMPLE_POLICIES:
            raise ConfigError(f"sweep.resample: expected one of {RESAMPLE_POLICIES}")
        if self.seeds_per_point < 1:
            raise ConfigError("sweep.seeds_per_point: must be a positive integer")


def default_sweep_epsilons() -> tuple[float, ...]:
    return tuple(np.geomspace(SWEEP_EPSILON_MIN, SWEEP_EPSILON_MAX, SWEEP_COUNT).tolist())


@dataclass(frozen=True)
class ExperimentConfig:
    model: ModelConfig
    initial_system: InitialSystem
    grid_t_max: float | None = None
    grid_n_steps: int = DEFAULT_N_STEPS
    sweep: SweepSpec | None = None
    outputs: str | None = None

    def to_dict(self) -> dict:
        d = {
            "model": {
                "env_dim": self.model.env_dim,
                "epsilon": self.model.epsilon,
                "hbar": self.model.hbar,
                "seed": self.model.seed,
                "convention": self.model.convention,
                "offdiag_coupling_scale": self.model.offdiag_coupling_scale,
                "e1": self.model.e1,
                "e2": self.model.e2,
            },
            "initial_system": {
                "type": self.initial_system.kind,
                "c1": [self.initial_system.c1.real, self.initial_system.c1.imag],
                "c2": [self.initial_system.c2.real, self.initial_system.c2.imag],
            },
            "grid": {"t_max": self.grid_t_max, "n_steps": self.grid_n_steps},
            "outputs": self.outputs,
        }
        if self.sweep is not None:
            d["sweep"] = {
                "epsilons": list(self.sweep.epsilons),
                "resample": self.sweep.resample,
                "seeds_per_point": self.sweep.seeds_per_point,
            }
        return d

    def hash(self) -> str:
        canon = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode()).hexdigest()


def _reject_unknown(obj: dict, allowed: set[str], path: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        key = sorted(unknown)[0]
        raise ConfigError(f"{path}{key}: unknown key")


def _get_number(obj: dict, key: str, path: str, default, *, integer=False, minimum=None, maximum=None, strict_min=False):
    if key not in obj:
        return default
    val = obj[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"{path}{key}: expected a number, got {val!r}")
    if integer and not isinstance(val, int):
        raise ConfigError(f"{path}{key}: expected an integer, got {val!r}")
    if minimum is not None and (val <= minimum if strict_min else val < minimum):
        cmp = ">" if strict_min else ">="
        raise ConfigError(f"{path}{key}: must be {cmp} {minimum}, got {val}")
    if maximum is not None and val > maximum:
        raise ConfigError(f"{path}{key}: must be <= {maximum}, got {val}")
    return val


def _parse_model(obj: dict) -> ModelConfig:
    if not isinstance(obj, dict):
        raise ConfigError(f"model: expected an object, got {obj!r}")
    allowed = {"env_dim", "epsilon", "hbar", "seed", "convention", "offdiag_coupling_scale", "e1", "e2"}
    _reject_unknown(obj, allowed, "model.")
    convention = obj.get("convention", "literal-paper")
    if convention not in GOE_CONVENTIONS:
        raise ConfigError(f"model.convention: expected one of {GOE_CONVENTIONS}, got {convention!r}")
    try:
        return ModelConfig(
            env_dim=_get_number(obj, "env_dim", "model.", DEFAULT_ENV_DIM, integer=True, minimum=1),
            epsilon=_get_number(obj, "epsilon", "model.", DEFAULT_EPSILON, minimum=0),
            seed=_get_number(obj, "seed", "model.", DEFAULT_SEED, integer=True, minimum=0),
            hbar=_get_number(obj, "hbar", "model.", 1.0, minimum=0, strict_min=True),
            convention=convention,
            offdiag_coupling_scale=_get_number(obj, "offdiag_coupling_scale", "model.", 1.0, minimum=0, maximum=1),
            e1=_get_number(obj, "e1", "model.", -0.5),
            e2=_get_number(obj, "e2", "model.", 0.5),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"model: {exc}") from exc


def _parse_complex_pair(val, path: str) -> complex:
    if (
        not isinstance(val, (list, tuple))
        or len(val) != 2
        or any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in val)
    ):
        raise ConfigError(f"{path}: expected [re, im], got {val!r}")
    return complex(val[0], val[1])


def _parse_initial_system(obj) -> InitialSystem:
    if obj is None:
        return InitialSystem("superposition")
    if isinstance(obj, str):
        if obj in EIGENSTATE_KINDS:
            c = (1.0, 0.0) if obj == "eigenstate-1" else (0.0, 1.0)
            return InitialSystem(obj, complex(c[0]), complex(c[1]))
        if obj == "superposition":
            return InitialSystem(obj)
        raise ConfigError(
            f"initial_system: expected one of {EIGENSTATE_KINDS + ('superposition',)}, got {obj!r}"
        )
    if isinstance(obj, dict):
        _reject_unknown(obj, {"type", "c1", "c2"}, "initial_system.")
        kind = obj.get("type", "superposition")
        if kind != "superposition":
            raise ConfigError(
                f"initial_system.type: only 'superposition' takes coefficients, got {kind!r}"
            )
        c1 = _parse_complex_pair(obj["c1"], "initial_system.c1") if "c1" in obj else complex(1 / math.sqrt(2))
        c2 = _parse_complex_pair(obj["c2"], "initial_system.c2") if "c2" in obj else complex(1 / math.sqrt(2))
        return InitialSystem(kind, c1, c2)
    raise ConfigError(f"initial_system: expected a string or object, got {obj!r}")


def _parse_sweep(obj) -> SweepSpec | None:
    if obj is None:
        return None
    if not isinstance(obj, dict):
        raise ConfigError(f"sweep: expected an object, got {obj!r}")
    allowed = {"epsilons", "epsilon_min", "epsilon_max", "count", "resample", "seeds_per_point"}
    _reject_unknown(obj, allowed, "sweep.")
    if "epsilons" in obj:
        if any(k in obj for k in ("epsilon_min", "epsilon_max", "count")):
            raise ConfigError("sweep.epsilons: give either an explicit list or min/max/count, not both")
        raw = obj["epsilons"]
        if not isinstance(raw, list) or any(
            isinstance(x, bool) or not isinstance(x, (int, float)) for x in raw
        ):
            raise ConfigError(f"sweep.epsilons: expected a list of numbers, got {raw!r}")
        eps = tuple(float(x) for x in raw)
    else:
        lo = _get_number(obj, "epsilon_min", "sweep.", SWEEP_EPSILON_MIN, minimum=0, strict_min=True)
        hi = _get_number(obj, "epsilon_max", "sweep.", SWEEP_EPSILON_MAX, minimum=0, strict_min=True)
        count = _get_number(obj, "count", "sweep.", SWEEP_COUNT, integer=True, minimum=2)
        if hi <= lo:
            raise ConfigError(f"sweep.epsilon_max: must exceed epsilon_min, got [{lo}, {hi}]")
        eps = tuple(np.geomspace(lo, hi, count).tolist())
    resample = obj.get("resample", "fixed-matrices")
    seeds_per_point = _get_number(obj, "seeds_per_point", "sweep.", SWEEP_SEEDS_PER_POINT, integer=True, minimum=1)
    return SweepSpec(eps, resample, seeds_per_point)


def parse_config(data: dict) -> ExperimentConfig:
    """Validate a decoded JSON object and fill defaults."""
    if not isinstance(data, dict):
        raise ConfigError(f"config root: expected an object, got {data!r}")
    _reject_unknown(data, {"model", "initial_system", "grid", "sweep", "outputs"}, "")
    model = _parse_model(data.get("model", {}))
    initial = _parse_initial_system(data.get("initial_system"))
    grid = data.get("grid", {})
    if not isinstance(grid, dict):
        raise ConfigError(f"grid: expected an object, got {grid!r}")
    _reject_unknown(grid, {"t_max", "n_steps"}, "grid.")
    t_max = grid.get("t_max")
    if t_max is not None:
        t_max = _get_number(grid, "t_max", "grid.", None, minimum=0, strict_min=True)
    n_steps = _get_number(grid, "n_steps", "grid.", DEFAULT_N_STEPS, integer=True, minimum=2)
    sweep = _parse_sweep(data.get("sweep"))
    outputs = data.get("outputs")
    if outputs is not None and not isinstance(outputs, str):
        raise ConfigError(f"outputs: expected a path string, got {outputs!r}")
    return ExperimentConfig(model, initial, t_max, n_steps, sweep, outputs)


def load_config(path: str | Path | None) -> ExperimentConfig:
    """Read and validate a JSON config file; None means all defaults."""
    if path is None:
        return parse_config({})
    p = Path(path)
    try:
        data = json.loads(p.read_text())
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {p}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {p} is not valid JSON: {exc}") from exc
    return parse_config(data)


def apply_overrides(
    config: ExperimentConfig,
    *,
    seed: int | None = None,
    epsilon: float | None = None,
    env_dim: int | None = None,
    offdiag_scale: float | None = None,
    outputs: str | None = None,
) -> ExperimentConfig:
    """CLI flags override the corresponding config fields."""
    m = config.model
    try:
        model = ModelConfig(
            env_dim=env_dim if env_dim is not None else m.env_dim,
            epsilon=epsilon if epsilon is not None else m.epsilon,
            seed=seed if seed is not None else m.seed,
            hbar=m.hbar,
            convention=m.convention,
            offdiag_coupling_scale=offdiag_scale if offdiag_scale is not None else m.offdiag_coupling_scale,
            e1=m.e1,
            e2=m.e2,
        )
    except ValueError as exc:
        raise ConfigError(f"model: {exc}") from exc
    return ExperimentConfig(
        model,
        config.initial_system,
        config.grid_t_max,
        config.grid_n_steps,
        config.sweep,
        outputs if outputs is not None else config.outputs,
    )
