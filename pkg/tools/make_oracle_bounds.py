#!/usr/bin/env python3
"""Brute-force oracle run fixing the exact-vs-first-order deviation bounds.

Evolves small (N=8) seeded models with repeated scipy expm stepping -- a
propagation path deliberately different from the package's spectral
propagator -- and records, per coupling strength, the largest deviation
between the exactly reduced coherence and the first-order fidelity
prediction.  Two measurement windows are recorded for every run:

* ``primary``: t up to 0.1 * tau_E (golden-rule relaxation time), the
  validity window of the first-order branch picture;
* ``fixed_c``: t up to 3 * tau_d (Gaussian 1/e time), the same window for
  every coupling when expressed in 1/e-time units, which is what makes the
  bound-shrink comparison across couplings meaningful.

Writes tests/fixtures/oracle_bounds.json.  Re-running regenerates the
fixture; the committed file is the frozen reference the acceptance suite
asserts against.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np
from scipy.linalg import expm

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from decoquench.model import ModelConfig, build_model, effective_env_hamiltonian, perturbation_v
from decoquench.sampling import sample_random_state
from decoquench.theory import fgr_relaxation, spectral_statistics, tau_d

ENV_DIM = 8
SEEDS = list(range(201, 211))
EPSILONS = [1e-4, 1e-3]
N_PRIMARY = 2001
N_FIXED = 601
SAFETY = 1.25  # margin on the recorded max before it becomes a bound


def stepped_states(h: np.ndarray, psi0: np.ndarray, times: np.ndarray) -> np.ndarray:
    """Evolve by repeated multiplication with expm(-i H dt): no spectral path."""
    dt = times[1] - times[0]
    u = expm(-1j * h * dt)
    out = np.empty((times.shape[0], psi0.shape[0]), dtype=complex)
    psi = psi0.astype(complex)
    for i in range(times.shape[0]):
        out[i] = psi
        psi = u @ psi
    return out


def rho12_exact(h_total: np.ndarray, psi0: np.ndarray, times: np.ndarray, n: int) -> np.ndarray:
    states = stepped_states(h_total, psi0, times)
    # partial trace over the environment, written out index by index
    upper = states[:, :n]
    lower = states[:, n:]
    return np.sum(upper * lower.conj(), axis=1)


def rho12_predicted(
    h_eff1: np.ndarray,
    h_eff2: np.ndarray,
    phi0: np.ndarray,
    c1: complex,
    c2: complex,
    e1: float,
    e2: float,
    times: np.ndarray,
) -> np.ndarray:
    phi_a = stepped_states(h_eff1, phi0, times)  # branch alpha = 1
    phi_b = stepped_states(h_eff2, phi0, times)  # branch beta = 2
    f21 = np.sum(phi_b.conj() * phi_a, axis=1)
    return np.exp(-1j * (e1 - e2) * times) * c1 * np.conj(c2) * f21


def run_one(seed: int, epsilon: float) -> dict:
    config = ModelConfig(env_dim=ENV_DIM, epsilon=epsilon, seed=seed)
    model = build_model(config)
    phi0 = sample_random_state(ENV_DIM, model.state_seed)
    c = 1.0 / np.sqrt(2.0)
    psi0 = np.kron(np.array([c, c]), phi0)

    h_eff1 = effective_env_hamiltonian(model, 1).operator.entries
    h_eff2 = effective_env_hamiltonian(model, 2).operator.entries
    v = perturbation_v(model)
    stats = spectral_statistics(effective_env_hamiltonian(model, 1), v)
    pred = tau_d(epsilon, stats)
    fgr = fgr_relaxation(model)

    windows = {
        "primary": (0.1 * fgr.tau_e, N_PRIMARY),
        "fixed_c": (3.0 * pred.tau_d_gauss, N_FIXED),
    }
    out = {"seed": seed, "tau_d_gauss": pred.tau_d_gauss, "tau_e_fgr": fgr.tau_e}
    for name, (t_max, n_samples) in windows.items():
        times = np.linspace(0.0, t_max, n_samples)
        exact = rho12_exact(model.h_total.entries, psi0, times, ENV_DIM)
        predicted = rho12_predicted(
            h_eff1, h_eff2, phi0, c, c, model.qubit.e1, model.qubit.e2, times
        )
        out[name] = {
            "t_max": t_max,
            "n_samples": n_samples,
            "max_abs_deviation": float(np.max(np.abs(exact - predicted))),
        }
    return out


def main() -> None:
    fixture = {
        "description": (
            "Max |rho12_exact - rho12_predicted| from a scipy-expm stepping oracle, "
            "N=8 superposition (1/sqrt2, 1/sqrt2), literal-paper convention. "
            "bound = safety * max over seeds."
        ),
        "env_dim": ENV_DIM,
        "seeds": SEEDS,
        "safety_factor": SAFETY,
        "per_epsilon": {},
    }
    for eps in EPSILONS:
        runs = [run_one(seed, eps) for seed in SEEDS]
        entry = {"runs": runs}
        for name in ("primary", "fixed_c"):
            worst = max(r[name]["max_abs_deviation"] for r in runs)
            entry[f"{name}_max"] = worst
            entry[f"{name}_bound"] = SAFETY * worst
        fixture["per_epsilon"][f"{eps:g}"] = entry
        print(
            f"eps={eps:g}: primary max={entry['primary_max']:.4e} "
            f"fixed_c max={entry['fixed_c_max']:.4e}"
        )

    lo, hi = (f"{e:g}" for e in sorted(EPSILONS))
    ratio = fixture["per_epsilon"][hi]["fixed_c_bound"] / fixture["per_epsilon"][lo]["fixed_c_bound"]
    fixture["fixed_c_bound_ratio"] = ratio
    print(f"fixed-window bound ratio (eps={hi} / eps={lo}): {ratio:.2f}")

    dest = Path(__file__).resolve().parents[1] / "tests" / "fixtures" / "oracle_bounds.json"
    dest.parent.mkdir(parents=True, exist_ok=True)
    dest.write_text(json.dumps(fixture, indent=2) + "\n")
    print(f"wrote {dest}")


if __name__ == "__main__":
    main()
