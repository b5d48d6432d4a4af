"""Experiment runners: single decay runs, coupling-strength sweeps, theory reports.

Every run is a pure function of (config, seed): the CSV and JSON outputs are
byte-identical across repeats.  Floating-point values are written in decimal
with 12 significant digits.

Protocol of a decay run: two evolutions of the same model and the same
random environment state, one starting from the qubit eigenstate
(populations and leakage), one from the superposition (coherence), plus the
two theory envelopes evaluated on the same grid.

Sweep seeding: replicate j uses model seed ``config.model.seed + j``.  Under
the fixed-matrices policy the sampled matrices and environment state are
shared by all couplings of a replicate; under fresh-per-epsilon each
(replicate, coupling index) pair derives its own model seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import ExperimentConfig, InitialSystem
from .errors import BorderUndefinedError, ConfigError
from .model import (
    Model,
    ModelConfig,
    assemble_total,
    build_model,
    effective_env_hamiltonian,
    perturbation_v,
)
from .propagator import TimeGrid, diagonalize, evolve_series, leakage_norm, reduced_density
from .sampling import sample_random_state
from .theory import (
    FgrEstimate,
    SpectralStatistics,
    TheoryPrediction,
    fgr_relaxation,
    gaussian_envelope,
    spectral_statistics,
    tau_d,
)
from .timescales import DecaySeries, TauEFit, TauMeasurement, extract_tau_d, extract_tau_e

EVOLVE_CSV_COLUMNS = (
    "t",
    "rho11",
    "rho22",
    "re_rho12",
    "im_rho12",
    "abs_rho12",
    "abs_f_pred_gauss",
    "abs_f_pred_exp",
    "leakage_alpha2",
)

SWEEP_CSV_COLUMNS = (
    "epsilon",
    "seed",
    "tau_d_measured",
    "tau_d_reason",
    "tau_e_measured",
    "tau_e_reason",
    "tau_d_gauss_theory",
    "tau_d_exp_theory",
    "tau_e_fgr_theory",
    "epsilon_p",
)

# Fallback horizon (units of hbar/gap) when eps = 0 predicts no decay at all.
NO_DECAY_T_MAX = 1000.0
MIN_SAMPLES_BEFORE_CROSSING = 100

# The golden-rule decay of the populations is linear only up to a few
# Heisenberg times of the environment spectrum (after which the discrete
# levels freeze the transfer); the slope fit for tau_E is confined there.
HEISENBERG_CAP_MULTIPLE = 2.0
# At strong coupling the window is instead limited by depletion; a 0.35
# population drop keeps the linearization bias of the fitted slope below
# ~15% without cutting the window into the short-time quadratic transient.
FIT_DROP_CAP = 0.35


def _fgr_fit_window(fgr: FgrEstimate, grid: TimeGrid, hbar: float) -> tuple[float, float]:
    """(fit_fraction, drop_cap) for extract_tau_e on this grid."""
    fraction = 0.2
    if fgr.dos > 0:
        heisenberg = 2.0 * math.pi * hbar * fgr.dos
        fraction = min(fraction, HEISENBERG_CAP_MULTIPLE * heisenberg / grid.t_max)
    # never hand the fit fewer than a handful of samples
    fraction = min(max(fraction, 4.0 / grid.n_steps), 1.0)
    return fraction, FIT_DROP_CAP


def fmt(x: float) -> str:
    """Decimal, 12 significant digits."""
    return format(float(x), ".12g")


def _fmt_or_empty(x: float | None) -> str:
    return "" if x is None else fmt(x)


def auto_grid(
    pred: TheoryPrediction | None,
    fgr: FgrEstimate | None,
    n_steps: int,
    gap: float,
    hbar: float,
) -> TimeGrid:
    """Default window: min(3 tau_d_gauss, 0.5 tau_E), stretched if needed so the
    predicted 1/e crossing sits inside the window with at least 100 samples
    before it."""
    if pred is None:
        return TimeGrid(NO_DECAY_T_MAX * hbar / abs(gap) if gap else NO_DECAY_T_MAX, n_steps)
    tau_ref = pred.tau_d_gauss if pred.regime == "below-border" else pred.tau_d_exp
    if not math.isfinite(tau_ref):
        finite = [t for t in (pred.tau_d_gauss, pred.tau_d_exp) if math.isfinite(t)]
        if not finite:
            return TimeGrid(NO_DECAY_T_MAX * hbar / abs(gap) if gap else NO_DECAY_T_MAX, n_steps)
        tau_ref = min(finite)
    t_max = pred.tau_d_gauss if math.isfinite(pred.tau_d_gauss) else tau_ref
    t_max *= 3.0
    if fgr is not None and fgr.tau_e is not None:
        t_max = min(t_max, 0.5 * fgr.tau_e)
    t_max = max(t_max, 2.0 * tau_ref)
    n = max(n_steps, math.ceil(MIN_SAMPLES_BEFORE_CROSSING * t_max / tau_ref) + 1)
    return TimeGrid(t_max, n)


@dataclass(frozen=True)
class DecayRun:
    """Everything measured in one two-branch evolution of one model."""

    model: Model
    grid: TimeGrid
    times: np.ndarray
    rho11: np.ndarray
    rho22: np.ndarray
    rho12: np.ndarray
    leakage: np.ndarray
    envelope_gauss: np.ndarray
    envelope_exp: np.ndarray
    stats: SpectralStatistics | None
    prediction: TheoryPrediction | None
    fgr: FgrEstimate
    epsilon_p: float | None
    tau_d: TauMeasurement
    tau_e: TauEFit

    @property
    def abs_rho12(self) -> np.ndarray:
        return np.abs(self.rho12)


def border_epsilon_p(model: Model) -> float | None:
    """Perturbative border from the eps -> 0 statistics (H_E itself)."""
    try:
        stats0 = spectral_statistics(model.h_env.entries, perturbation_v(model))
        return stats0.sigma_v * stats0.delta / (2.0 * math.pi * stats0.v_nd_sq) if stats0.v_nd_sq > 0 else None
    except BorderUndefinedError:
        return None


def run_decay(
    model: Model,
    initial: InitialSystem,
    grid: TimeGrid | None = None,
    n_steps: int = 1000,
    phi0: np.ndarray | None = None,
) -> DecayRun:
    """Evolve the population and coherence branches of one model."""
    cfg = model.config
    n = cfg.env_dim
    if phi0 is None:
        phi0 = sample_random_state(n, model.state_seed)

    v = perturbation_v(model)
    h_eff1 = effective_env_hamiltonian(model, 1)
    stats = prediction = None
    if cfg.epsilon > 0 and n >= 2:
        stats = spectral_statistics(h_eff1, v)
        prediction = tau_d(cfg.epsilon, stats, cfg.hbar)
    fgr = fgr_relaxation(model) if n >= 2 else FgrEstimate(0.0, 0.0, 0.0, None)
    epsilon_p = border_epsilon_p(model) if n >= 2 else None

    if grid is None:
        grid = auto_grid(prediction, fgr, n_steps, model.qubit.gap, cfg.hbar)
    times = grid.times

    full = diagonalize(model.h_total)

    pop_alpha = initial.population_alpha
    e_pop = np.zeros(2, dtype=complex)
    e_pop[pop_alpha - 1] = 1.0
    pop_states = evolve_series(full, np.kron(e_pop, phi0), times, cfg.hbar)
    rho11 = np.empty(times.shape[0])
    rho22 = np.empty(times.shape[0])
    leakage = np.empty(times.shape[0])
    for i, state in enumerate(pop_states):
        rho = reduced_density(state, n)
        rho11[i] = rho[0, 0].real
        rho22[i] = rho[1, 1].real
        leakage[i] = leakage_norm(state, pop_alpha, n)

    coh_states = evolve_series(full, np.kron(np.array(initial.coefficients), phi0), times, cfg.hbar)
    rho12 = np.array([reduced_density(s, n)[0, 1] for s in coh_states])

    if stats is not None:
        env_gauss = gaussian_envelope(cfg.epsilon, stats.sigma_v, cfg.hbar, times)
        gamma = prediction.gamma
        env_exp = np.exp(-gamma * times / (2.0 * cfg.hbar))
    else:
        env_gauss = np.ones_like(times)
        env_exp = np.ones_like(times)

    tau_d_meas = extract_tau_d(DecaySeries(times, np.abs(rho12)))
    pop_series = DecaySeries(times, rho22 if pop_alpha == 2 else rho11)
    tau_e_meas = extract_tau_e(pop_series, *_fgr_fit_window(fgr, grid, cfg.hbar))

    return DecayRun(
        model=model,
        grid=grid,
        times=times,
        rho11=rho11,
        rho22=rho22,
        rho12=rho12,
        leakage=leakage,
        envelope_gauss=env_gauss,
        envelope_exp=env_exp,
        stats=stats,
        prediction=prediction,
        fgr=fgr,
        epsilon_p=epsilon_p,
        tau_d=tau_d_meas,
        tau_e=tau_e_meas,
    )


def evolve_csv_text(run: DecayRun) -> str:
    lines = [",".join(EVOLVE_CSV_COLUMNS)]
    for i, t in enumerate(run.times):
        row = (
            fmt(t),
            fmt(run.rho11[i]),
            fmt(run.rho22[i]),
            fmt(run.rho12[i].real),
            fmt(run.rho12[i].imag),
            fmt(abs(run.rho12[i])),
            fmt(run.envelope_gauss[i]),
            fmt(run.envelope_exp[i]),
            fmt(run.leakage[i]),
        )
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def _stats_dict(stats: SpectralStatistics | None) -> dict | None:
    if stats is None:
        return None
    return {
        "sigma_v": stats.sigma_v,
        "v_nd_sq": stats.v_nd_sq,
        "delta": stats.delta,
        "window": stats.window,
        "window_fraction": stats.window_fraction,
        "window_size": stats.window_size,
    }


def _prediction_dict(pred: TheoryPrediction | None) -> dict | None:
    if pred is None:
        return None
    return {
        "epsilon_p": pred.epsilon_p if math.isfinite(pred.epsilon_p) else None,
        "gamma": pred.gamma,
        "tau_d_gauss": pred.tau_d_gauss if math.isfinite(pred.tau_d_gauss) else None,
        "tau_d_exp": pred.tau_d_exp if math.isfinite(pred.tau_d_exp) else None,
        "regime": pred.regime,
    }


def _fgr_dict(fgr: FgrEstimate) -> dict:
    return {"dos": fgr.dos, "h_i_nd_sq": fgr.h_i_nd_sq, "rate": fgr.rate, "tau_e": fgr.tau_e}


def _measurement_dict(m: TauMeasurement) -> dict:
    d = {"value": m.value, "reason": m.reason}
    if isinstance(m, TauEFit):
        d.update({"fit_window": m.fit_window, "slope": m.slope, "residual_rms": m.residual_rms})
    return d


def run_record(run: DecayRun, config: ExperimentConfig) -> dict:
    return {
        "config_hash": config.hash(),
        "config": config.to_dict(),
        "seed": run.model.config.seed,
        "grid": {"t_max": run.grid.t_max, "n_steps": run.grid.n_steps},
        "statistics": _stats_dict(run.stats),
        "epsilon_p": run.epsilon_p,
        "theory": _prediction_dict(run.prediction),
        "fgr": _fgr_dict(run.fgr),
        "measured": {
            "tau_d": _measurement_dict(run.tau_d),
            "tau_e": _measurement_dict(run.tau_e),
        },
    }


def run_evolve(config: ExperimentConfig, out_dir: str | Path) -> dict:
    """Single decay run; writes evolve.csv and evolve.json into out_dir."""
    out = _prepare_out_dir(out_dir)
    model = build_model(config.model)
    grid = None
    if config.grid_t_max is not None:
        grid = TimeGrid(config.grid_t_max, config.grid_n_steps)
    run = run_decay(model, config.initial_system, grid=grid, n_steps=config.grid_n_steps)
    record = run_record(run, config)
    (out / "evolve.csv").write_text(evolve_csv_text(run))
    record["csv"] = "evolve.csv"
    _write_json(out / "evolve.json", record)
    return record


@dataclass(frozen=True)
class SweepPoint:
    epsilon: float
    seed: int
    tau_d: TauMeasurement
    tau_e: TauEFit
    tau_d_gauss_theory: float | None
    tau_d_exp_theory: float | None
    tau_e_fgr_theory: float | None
    epsilon_p: float | None


def _fresh_seed(base_seed: int, eps_index: int) -> int:
    """Deterministic derived model seed for the fresh-per-epsilon policy."""
    return int(np.random.SeedSequence((base_seed, eps_index)).generate_state(1, np.uint64)[0])


def _model_at_epsilon(template: Model, epsilon: float) -> Model:
    """Reassemble the total Hamiltonian from fixed sampled pieces."""
    cfg = template.config
    new_cfg = ModelConfig(
        env_dim=cfg.env_dim,
        epsilon=epsilon,
        seed=cfg.seed,
        hbar=cfg.hbar,
        convention=cfg.convention,
        offdiag_coupling_scale=cfg.offdiag_coupling_scale,
        e1=cfg.e1,
        e2=cfg.e2,
    )
    h_total = assemble_total(template.qubit, template.h_env, template.h_int, epsilon)
    return Model(new_cfg, template.qubit, template.h_env, template.h_int, h_total, template.state_seed)


def run_sweep(config: ExperimentConfig, out_dir: str | Path, progress=None) -> dict:
    """Coupling-strength sweep; writes sweep.csv and sweep.json into out_dir."""
    if config.sweep is None:
        raise ConfigError("sweep: section missing from config")
    sweep = config.sweep
    out = _prepare_out_dir(out_dir)

    # Precondition: the requested couplings must bracket the predicted border.
    probe = build_model(_sweep_model_config(config.model, config.model.seed, config.model.epsilon))
    eps_p_probe = border_epsilon_p(probe)
    if eps_p_probe is not None and not (sweep.epsilons[0] < eps_p_probe < sweep.epsilons[-1]):
        raise ConfigError(
            f"sweep.epsilons: range [{sweep.epsilons[0]:g}, {sweep.epsilons[-1]:g}] does not "
            f"bracket the predicted border epsilon_p = {eps_p_probe:.3g}"
        )

    points: list[SweepPoint] = []
    for j in range(sweep.seeds_per_point):
        seed_j = config.model.seed + j
        template = None
        phi0 = None
        eps_p_seed = None
        if sweep.resample == "fixed-matrices":
            template = build_model(_sweep_model_config(config.model, seed_j, sweep.epsilons[0]))
            phi0 = sample_random_state(config.model.env_dim, template.state_seed)
            eps_p_seed = border_epsilon_p(template)
        for i, eps in enumerate(sweep.epsilons):
            if sweep.resample == "fixed-matrices":
                model = _model_at_epsilon(template, eps)
                point_phi0 = phi0
                eps_p = eps_p_seed
            else:
                model = build_model(_sweep_model_config(config.model, _fresh_seed(seed_j, i), eps))
                point_phi0 = sample_random_state(config.model.env_dim, model.state_seed)
                eps_p = border_epsilon_p(model)
            run = run_decay(model, config.initial_system, n_steps=config.grid_n_steps, phi0=point_phi0)
            pred = run.prediction
            points.append(
                SweepPoint(
                    epsilon=eps,
                    seed=seed_j,
                    tau_d=run.tau_d,
                    tau_e=run.tau_e,
                    tau_d_gauss_theory=None if pred is None or not math.isfinite(pred.tau_d_gauss) else pred.tau_d_gauss,
                    tau_d_exp_theory=None if pred is None or not math.isfinite(pred.tau_d_exp) else pred.tau_d_exp,
                    tau_e_fgr_theory=run.fgr.tau_e,
                    epsilon_p=eps_p,
                )
            )
            if progress is not None:
                progress(f"epsilon={eps:g} seed={seed_j} "
                         f"tau_d={_fmt_or_empty(run.tau_d.value) or run.tau_d.reason} "
                         f"tau_e={_fmt_or_empty(run.tau_e.value) or run.tau_e.reason}")

    csv_text = sweep_csv_text(points)
    (out / "sweep.csv").write_text(csv_text)
    summary = sweep_summary(points, config)
    summary["csv"] = "sweep.csv"
    _write_json(out / "sweep.json", summary)
    return summary


def _sweep_model_config(base: ModelConfig, seed: int, epsilon: float) -> ModelConfig:
    return ModelConfig(
        env_dim=base.env_dim,
        epsilon=epsilon,
        seed=seed,
        hbar=base.hbar,
        convention=base.convention,
        offdiag_coupling_scale=base.offdiag_coupling_scale,
        e1=base.e1,
        e2=base.e2,
    )


def sweep_csv_text(points: list[SweepPoint]) -> str:
    lines = [",".join(SWEEP_CSV_COLUMNS)]
    for p in points:
        row = (
            fmt(p.epsilon),
            str(p.seed),
            _fmt_or_empty(p.tau_d.value),
            p.tau_d.reason or "",
            _fmt_or_empty(p.tau_e.value),
            p.tau_e.reason or "",
            _fmt_or_empty(p.tau_d_gauss_theory),
            _fmt_or_empty(p.tau_d_exp_theory),
            _fmt_or_empty(p.tau_e_fgr_theory),
            _fmt_or_empty(p.epsilon_p),
        )
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def loglog_slope(eps: np.ndarray, values: np.ndarray) -> float | None:
    """Least-squares slope of log(value) against log(eps); None below 2 points."""
    mask = np.isfinite(values) & (values > 0)
    if int(np.sum(mask)) < 2:
        return None
    return float(np.polyfit(np.log(eps[mask]), np.log(values[mask]), 1)[0])


def _median_by_epsilon(points: list[SweepPoint], attr: str) -> tuple[np.ndarray, np.ndarray]:
    eps_values = sorted({p.epsilon for p in points})
    medians = []
    for e in eps_values:
        vals = [getattr(p, attr).value for p in points if p.epsilon == e]
        vals = [v for v in vals if v is not None]
        medians.append(float(np.median(vals)) if vals else np.nan)
    return np.array(eps_values), np.array(medians)


def sweep_summary(points: list[SweepPoint], config: ExperimentConfig) -> dict:
    eps, med_tau_d = _median_by_epsilon(points, "tau_d")
    _, med_tau_e = _median_by_epsilon(points, "tau_e")
    eps_p_values = [p.epsilon_p for p in points if p.epsilon_p is not None]
    eps_p = float(np.median(eps_p_values)) if eps_p_values else None

    slopes = {"tau_e_overall": loglog_slope(eps, med_tau_e)}
    if eps_p is not None:
        below = eps <= eps_p / 3.0
        above = eps >= 3.0 * eps_p
        slopes["tau_d_below_border"] = loglog_slope(eps[below], med_tau_d[below])
        slopes["tau_d_above_border"] = loglog_slope(eps[above], med_tau_d[above])
    else:
        slopes["tau_d_below_border"] = None
        slopes["tau_d_above_border"] = None

    return {
        "config_hash": config.hash(),
        "config": config.to_dict(),
        "epsilon_p_median": eps_p,
        "epsilons": eps.tolist(),
        "tau_d_median": [None if np.isnan(x) else x for x in med_tau_d],
        "tau_e_median": [None if np.isnan(x) else x for x in med_tau_e],
        "slopes": slopes,
        "points": [
            {
                "epsilon": p.epsilon,
                "seed": p.seed,
                "tau_d": _measurement_dict(p.tau_d),
                "tau_e": _measurement_dict(p.tau_e),
                "tau_d_gauss_theory": p.tau_d_gauss_theory,
                "tau_d_exp_theory": p.tau_d_exp_theory,
                "tau_e_fgr_theory": p.tau_e_fgr_theory,
                "epsilon_p": p.epsilon_p,
            }
            for p in points
        ],
    }


def run_theory(config: ExperimentConfig) -> dict:
    """Scalar theory report for one model configuration."""
    model = build_model(config.model)
    cfg = model.config
    v = perturbation_v(model)
    h_eff1 = effective_env_hamiltonian(model, 1)
    stats = spectral_statistics(h_eff1, v)
    fgr = fgr_relaxation(model)

    eps_p = border_epsilon_p(model)
    border_flag = None if eps_p is not None else "undefined"

    pred = None
    if cfg.epsilon > 0 and (stats.sigma_v > 0 or stats.v_nd_sq > 0):
        pred = tau_d(cfg.epsilon, stats, cfg.hbar)

    report = {
        "config_hash": config.hash(),
        "config": config.to_dict(),
        "statistics": _stats_dict(stats),
        "epsilon_p": eps_p,
        "border_flag": border_flag,
        "theory": _prediction_dict(pred),
        "fgr": _fgr_dict(fgr),
    }
    return report


def _prepare_out_dir(out_dir: str | Path) -> Path:
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".write_probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise ConfigError(f"outputs: cannot write to {out}: {exc}") from exc
    return out


def _write_json(path: Path, payload: dict) -> None:
    import json

    path.write_text(json.dumps(payload, indent=2, sort_keys=False) + "\n")
