import numpy as np
import pytest

from decoquench.errors import InvalidDimensionError, InvalidLabelError
from decoquench.model import (
    InteractionOperator,
    Model,
    ModelConfig,
    QubitSystem,
    assemble_total,
    build_model,
    effective_env_hamiltonian,
    interaction_block,
    perturbation_v,
)
from decoquench.sampling import SymmetricOperator


def zero_interaction(n):
    return InteractionOperator.from_symmetric(SymmetricOperator(np.zeros((2 * n, 2 * n))), n)


def test_point_environment_decouples():
    # N=1, H_E = [0], H_I = 0: total Hamiltonian is just the qubit
    qubit = QubitSystem()
    total = assemble_total(qubit, SymmetricOperator(np.zeros((1, 1))), zero_interaction(1), epsilon=0.3)
    assert np.array_equal(total.entries, np.diag([-0.5, 0.5]))


def test_zero_coupling_identity():
    model = build_model(ModelConfig(env_dim=6, epsilon=0.0, seed=3))
    expected = np.kron(np.diag([-0.5, 0.5]), np.eye(6)) + np.kron(np.eye(2), model.h_env.entries)
    assert np.array_equal(model.h_total.entries, expected)


def test_paper_dimensions_and_exact_symmetry():
    model = build_model(ModelConfig(env_dim=200, epsilon=5e-4, seed=42))
    h = model.h_total.entries
    assert h.shape == (400, 400)
    assert np.max(np.abs(h - h.T)) == 0.0


def test_determinism_in_seed():
    a = build_model(ModelConfig(env_dim=12, epsilon=0.1, seed=9))
    b = build_model(ModelConfig(env_dim=12, epsilon=0.1, seed=9))
    assert np.array_equal(a.h_total.entries, b.h_total.entries)


def test_linearity_in_epsilon():
    eps = 0.37
    base = ModelConfig(env_dim=10, epsilon=0.0, seed=5)
    scaled = ModelConfig(env_dim=10, epsilon=eps, seed=5)
    h0 = build_model(base).h_total.entries
    h1 = build_model(scaled).h_total.entries
    h_i = build_model(scaled).h_int.matrix.entries
    # floating-point cancellation keeps this at the last-ulp level, not exact
    assert np.max(np.abs((h1 - h0) - eps * h_i)) < 1e-13


def test_interaction_block_bookkeeping():
    model = build_model(ModelConfig(env_dim=8, epsilon=0.1, seed=4))
    full = model.h_int.matrix.entries
    n = 8
    for alpha in (1, 2):
        for alpha_prime in (1, 2):
            block = interaction_block(model.h_int, alpha, alpha_prime)
            rows = slice((alpha - 1) * n, alpha * n)
            cols = slice((alpha_prime - 1) * n, alpha_prime * n)
            assert np.array_equal(block, full[rows, cols])


def test_diagonal_block_symmetric_zero_case():
    h_int = zero_interaction(4)
    assert np.array_equal(interaction_block(h_int, 1, 2), np.zeros((4, 4)))
    block = interaction_block(h_int, 2, 2)
    assert np.array_equal(block, block.T)


def test_diagonal_blocks_equal_own_transpose():
    model = build_model(ModelConfig(env_dim=16, epsilon=0.1, seed=21))
    for alpha in (1, 2):
        block = interaction_block(model.h_int, alpha, alpha)
        assert np.array_equal(block, block.T)


def test_invalid_label():
    model = build_model(ModelConfig(env_dim=4, epsilon=0.1, seed=1))
    with pytest.raises(InvalidLabelError):
        interaction_block(model.h_int, 0, 1)
    with pytest.raises(InvalidLabelError):
        effective_env_hamiltonian(model, 3)


def test_effective_env_zero_coupling_returns_h_env():
    model = build_model(ModelConfig(env_dim=6, epsilon=0.0, seed=2))
    eff = effective_env_hamiltonian(model, 1)
    assert np.array_equal(eff.operator.entries, model.h_env.entries)


def test_effective_env_reconstruction():
    model = build_model(ModelConfig(env_dim=8, epsilon=0.1, seed=6))
    eff = effective_env_hamiltonian(model, 2)
    reconstructed = (eff.operator.entries - model.h_env.entries) / 0.1
    assert np.max(np.abs(reconstructed - model.h_int.block(2, 2))) < 1e-14


def test_perturbation_v_definition():
    model = build_model(ModelConfig(env_dim=10, epsilon=0.2, seed=8))
    v = perturbation_v(model).operator.entries
    expected = model.h_int.block(2, 2) - model.h_int.block(1, 1)
    assert np.array_equal(v, expected)
    assert np.array_equal(v, v.T)


def test_perturbation_v_zero_when_blocks_match():
    n = 5
    m = np.zeros((2 * n, 2 * n))
    diag_block = np.arange(n * n, dtype=float).reshape(n, n)
    diag_block = diag_block + diag_block.T
    m[:n, :n] = diag_block
    m[n:, n:] = diag_block
    h_int = InteractionOperator.from_symmetric(SymmetricOperator(m), n)
    model = Model(
        ModelConfig(env_dim=n, epsilon=0.1, seed=0),
        QubitSystem(),
        SymmetricOperator(np.zeros((n, n))),
        h_int,
        assemble_total(QubitSystem(), SymmetricOperator(np.zeros((n, n))), h_int, 0.1),
    )
    assert np.array_equal(perturbation_v(model).operator.entries, np.zeros((n, n)))


def test_perturbation_v_offdiag_variance():
    # V entries are differences of two independent unit-variance Gaussians
    model = build_model(ModelConfig(env_dim=200, epsilon=5e-4, seed=42))
    v = perturbation_v(model).operator.entries
    off = v[np.triu_indices(200, k=1)]
    assert 1.92 <= np.var(off, ddof=1) <= 2.08


def test_coupling_filter_scales_offdiagonal_blocks_only():
    g = 0.25
    full = build_model(ModelConfig(env_dim=8, epsilon=0.1, seed=13))
    filtered = build_model(ModelConfig(env_dim=8, epsilon=0.1, seed=13, offdiag_coupling_scale=g))
    assert np.array_equal(filtered.h_int.block(1, 1), full.h_int.block(1, 1))
    assert np.array_equal(filtered.h_int.block(2, 2), full.h_int.block(2, 2))
    assert np.array_equal(filtered.h_int.block(1, 2), g * full.h_int.block(1, 2))


def test_coupling_filter_zero_commutes_with_qubit_hamiltonian():
    model = build_model(ModelConfig(env_dim=10, epsilon=0.3, seed=17, offdiag_coupling_scale=0.0))
    h = model.h_total.entries
    h_s = np.kron(np.diag([-0.5, 0.5]), np.eye(10))
    assert np.max(np.abs(h @ h_s - h_s @ h)) == 0.0


def test_invalid_config():
    with pytest.raises(InvalidDimensionError):
        ModelConfig(env_dim=0, epsilon=0.1, seed=1)
    with pytest.raises(ValueError):
        ModelConfig(env_dim=4, epsilon=-0.1, seed=1)
    with pytest.raises(ValueError):
        ModelConfig(env_dim=4, epsilon=0.1, seed=1, hbar=0.0)
    with pytest.raises(ValueError):
        ModelConfig(env_dim=4, epsilon=0.1, seed=1, offdiag_coupling_scale=1.5)
