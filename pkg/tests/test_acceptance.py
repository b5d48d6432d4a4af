"""Acceptance gate: one test per primary criterion, at the stated tolerances.

Each test prints one PASS/FAIL line so the gate can be read off the run log:

    pytest tests/test_acceptance.py -s
"""

import json
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

import decoquench as dq
from decoquench.config import DEFAULT_SEED, parse_config
from decoquench.fidelity import compare_exact, fidelity_series
from decoquench.harness import run_decay, run_evolve, run_sweep
from decoquench.model import (
    EffectiveEnvHamiltonian,
    ModelConfig,
    PerturbationOperator,
    build_model,
    effective_env_hamiltonian,
    perturbation_v,
)
from decoquench.propagator import TimeGrid, diagonalize, evolve_series, reduced_density
from decoquench.sampling import SymmetricOperator, sample_goe, sample_random_state

FIXTURES = Path(__file__).parent / "fixtures"

PAPER_N = 200


def report(name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f"  ({detail})" if detail else ""
    print(f"\nACCEPTANCE {name}: {status}{suffix}")


def gaussian_window_metrics(epsilon: float, offdiag_scale: float = 1.0):
    """Normalized coherence vs Gaussian envelope on the window down to envelope 0.2."""
    cfg = ModelConfig(
        env_dim=PAPER_N, epsilon=epsilon, seed=DEFAULT_SEED, offdiag_coupling_scale=offdiag_scale
    )
    run = run_decay(build_model(cfg), dq.InitialSystem("superposition"))
    window = run.envelope_gauss >= 0.2
    normalized = run.abs_rho12 / run.abs_rho12[0]
    rms = float(np.sqrt(np.mean((normalized[window] - run.envelope_gauss[window]) ** 2)))
    pop_change_window = float(np.max(np.abs(run.rho22[window] - 1.0)))
    up_to_tau_d = run.times <= run.tau_d.value
    pop_change_tau_d = float(np.max(np.abs(run.rho22[up_to_tau_d] - 1.0)))
    return run, rms, pop_change_window, pop_change_tau_d


def test_gaussian_regime_decay():
    start = time.perf_counter()
    run, rms, pop_change, _ = gaussian_window_metrics(5e-4)
    elapsed = time.perf_counter() - start
    ok = rms <= 0.05 and pop_change <= 0.02 and elapsed <= 60.0
    report(
        "gaussian-regime decay",
        ok,
        f"rms={rms:.4f} pop_change={pop_change:.4f} runtime={elapsed:.1f}s",
    )
    assert rms <= 0.05
    assert pop_change <= 0.02
    assert elapsed <= 60.0


def test_border_estimate():
    model = build_model(ModelConfig(env_dim=PAPER_N, epsilon=5e-4, seed=DEFAULT_SEED))
    from decoquench.harness import border_epsilon_p

    eps_p = border_epsilon_p(model)
    ok = 0.02 <= eps_p <= 0.08
    report("perturbative border estimate", ok, f"eps_p={eps_p:.4f} in [0.02, 0.08]")
    assert ok


def test_near_border_deviation():
    _, rms_full, _, pop_at_tau_d = gaussian_window_metrics(0.01)
    _, rms_filtered, pop_filtered, _ = gaussian_window_metrics(0.01, offdiag_scale=0.1)
    ok = rms_full > 0.05 and pop_at_tau_d > 0.05 and rms_filtered < 0.05 and pop_filtered < 0.02
    report(
        "near-border deviation",
        ok,
        f"rms={rms_full:.4f}>0.05 pop@tau_d={pop_at_tau_d:.4f}>0.05 | "
        f"g=0.1: rms={rms_filtered:.4f}<0.05 pop={pop_filtered:.4f}<0.02",
    )
    assert rms_full > 0.05
    assert pop_at_tau_d > 0.05
    assert rms_filtered < 0.05
    assert pop_filtered < 0.02


def test_scaling_separation(tmp_path):
    start = time.perf_counter()
    config = parse_config(
        {"model": {"env_dim": PAPER_N, "seed": DEFAULT_SEED}, "sweep": {}}
    )
    summary = run_sweep(config, tmp_path)
    elapsed = time.perf_counter() - start

    slopes = summary["slopes"]
    below, above, te = slopes["tau_d_below_border"], slopes["tau_d_above_border"], slopes["tau_e_overall"]
    eps_p = summary["epsilon_p_median"]
    eps = np.array(summary["epsilons"])
    med_tau_d = np.array([np.nan if x is None else x for x in summary["tau_d_median"]])

    # median measured tau_d against the matching branch formula, factor 2
    med_gauss = {}
    med_exp = {}
    for p in summary["points"]:
        med_gauss.setdefault(p["epsilon"], []).append(p["tau_d_gauss_theory"])
        med_exp.setdefault(p["epsilon"], []).append(p["tau_d_exp_theory"])
    ratios = []
    for i, e in enumerate(eps):
        theory = np.median(med_gauss[e]) if e < eps_p else np.median(med_exp[e])
        ratios.append(med_tau_d[i] / theory)
    ratios = np.array(ratios)
    factor2 = bool(np.all((ratios >= 0.5) & (ratios <= 2.0)))

    ok = (
        abs(below + 1.0) <= 0.15
        and abs(above + 2.0) <= 0.2
        and abs(te + 2.0) <= 0.2
        and factor2
        and elapsed <= 900.0
    )
    report(
        "timescale scaling separation",
        ok,
        f"slope_below={below:.3f} (-1±0.15) slope_above={above:.3f} (-2±0.2) "
        f"slope_tau_e={te:.3f} (-2±0.2) factor2={factor2} runtime={elapsed:.0f}s",
    )
    assert abs(below + 1.0) <= 0.15
    assert abs(above + 2.0) <= 0.2
    assert abs(te + 2.0) <= 0.2
    assert factor2, f"tau_d/theory ratios out of [0.5, 2]: {ratios}"
    assert elapsed <= 900.0


def test_first_order_oracle_equivalence():
    fixture = json.loads((FIXTURES / "oracle_bounds.json").read_text())
    c = 1 / np.sqrt(2)
    worst = {}
    for eps_key, entry in fixture["per_epsilon"].items():
        eps = float(eps_key)
        for window in ("primary", "fixed_c"):
            bound = entry[f"{window}_bound"]
            for run in entry["runs"]:
                model = build_model(ModelConfig(env_dim=fixture["env_dim"], epsilon=eps, seed=run["seed"]))
                phi0 = sample_random_state(fixture["env_dim"], model.state_seed)
                grid = TimeGrid(run[window]["t_max"], run[window]["n_samples"])
                cmp = compare_exact(model, (c, c), phi0, grid)
                worst[(eps_key, window)] = max(worst.get((eps_key, window), 0.0), cmp.max_abs_deviation)
                assert cmp.max_abs_deviation <= bound, (
                    f"eps={eps_key} seed={run['seed']} window={window}: "
                    f"{cmp.max_abs_deviation:.4e} > bound {bound:.4e}"
                )
    ratio = fixture["fixed_c_bound_ratio"]
    ok = ratio >= 10.0
    report(
        "first-order oracle equivalence",
        ok,
        f"max dev primary: 1e-4->{worst[('0.0001', 'primary')]:.3e} 1e-3->{worst[('0.001', 'primary')]:.3e}; "
        f"fixed-window bound ratio={ratio:.1f} (>=10)",
    )
    assert ratio >= 10.0


def test_invariant_suite(tmp_path):
    checks = {}

    # unitarity and reduced-density invariants along a seeded evolution
    model = build_model(ModelConfig(env_dim=32, epsilon=5e-3, seed=DEFAULT_SEED))
    phi0 = sample_random_state(32, model.state_seed)
    psi0 = np.kron(np.array([1, 1]) / np.sqrt(2), phi0)
    states = evolve_series(diagonalize(model.h_total), psi0, np.linspace(0, 200, 300))
    norms = np.linalg.norm(states, axis=1)
    checks["unitarity"] = float(np.max(np.abs(norms - 1.0))) < 1e-10
    herm = trace = posit = 0.0
    for s in states:
        rho = reduced_density(s, 32)
        herm = max(herm, float(np.max(np.abs(rho - rho.conj().T))))
        trace = max(trace, abs(float(np.trace(rho).real) - 1.0))
        posit = min(posit, float(np.min(np.linalg.eigvalsh(rho))))
    checks["hermiticity"] = herm < 1e-12
    checks["trace"] = trace < 1e-10
    checks["positivity"] = posit > -1e-10

    # fidelity invariants
    f = fidelity_series(
        effective_env_hamiltonian(model, 1), perturbation_v(model), 5e-3, phi0, TimeGrid(200.0, 200)
    )
    checks["f0_is_one"] = abs(f.values[0] - 1.0) < 1e-10
    checks["f_bounded"] = float(np.max(np.abs(f.values))) <= 1.0 + 1e-10

    # eps = 0 freezes the coherence magnitude
    frozen = build_model(ModelConfig(env_dim=32, epsilon=0.0, seed=DEFAULT_SEED))
    fstates = evolve_series(diagonalize(frozen.h_total), psi0, np.linspace(0, 200, 120))
    coh = np.array([abs(reduced_density(s, 32)[0, 1]) for s in fstates])
    checks["frozen_coherence"] = float(np.max(np.abs(coh - coh[0]))) < 1e-10

    # constant V keeps |f| = 1
    h = sample_goe(24, seed=1)
    fv = fidelity_series(
        EffectiveEnvHamiltonian(1, h),
        PerturbationOperator(SymmetricOperator(2.0 * np.eye(24))),
        0.1,
        sample_random_state(24, seed=2),
        TimeGrid(100.0, 100),
    )
    checks["constant_v"] = float(np.max(np.abs(np.abs(fv.values) - 1.0))) < 1e-10

    # seed determinism: byte-identical CSV
    cfg = parse_config({"model": {"env_dim": 24, "epsilon": 5e-3, "seed": DEFAULT_SEED}})
    run_evolve(cfg, tmp_path / "a")
    run_evolve(cfg, tmp_path / "b")
    checks["determinism"] = (
        (tmp_path / "a" / "evolve.csv").read_bytes() == (tmp_path / "b" / "evolve.csv").read_bytes()
    )

    ok = all(checks.values())
    failed = [k for k, v in checks.items() if not v]
    report("invariant suite", ok, "all green" if ok else f"failed: {failed}")
    assert ok, f"failed invariants: {failed}"


def test_primary_runs_without_secondary(tmp_path):
    # outputs are CSV/JSON only, and the package imports no plotting stack
    cfg = parse_config(
        {
            "model": {"env_dim": 16, "epsilon": 0.01, "seed": 3},
            "grid": {"n_steps": 120},
            "sweep": {"epsilons": [0.01, 0.1, 0.6], "seeds_per_point": 1},
        }
    )
    run_evolve(cfg, tmp_path)
    run_sweep(cfg, tmp_path)
    produced = sorted(p.name for p in tmp_path.iterdir())
    only_csv_json = all(p.endswith((".csv", ".json")) for p in produced)

    probe = subprocess.run(
        [
            sys.executable,
            "-c",
            "import sys, decoquench, decoquench.cli, decoquench.harness; "
            "banned = [m for m in sys.modules if m.split('.')[0] in "
            "('matplotlib', 'plotly', 'PIL', 'seaborn')]; print(banned)",
        ],
        capture_output=True,
        text=True,
    )
    no_plotting = probe.returncode == 0 and probe.stdout.strip() == "[]"
    ok = only_csv_json and no_plotting and len(produced) == 4
    report(
        "primary standalone (no secondary)",
        ok,
        f"outputs={produced} plotting_imports={probe.stdout.strip()}",
    )
    assert only_csv_json
    assert no_plotting
