"""Tests for the ADMM solver and its building blocks."""

import numpy as np
import pytest

from vhlift.lift import LiftShape, vec_hankel
from vhlift.model import (
    apply_measurement,
    sample_model,
    sample_subspace,
    synthesize_data_matrix,
)
from vhlift.solver import (
    SolveReport,
    SolverConfig,
    nuclear_norm,
    report_to_dict,
    solve_vhl,
    svt,
)


# ---------------------------------------------------------------- svt

def test_svt_identity_and_full_shrinkage():
    rng = np.random.default_rng(0)
    M = rng.standard_normal((5, 4)) + 1j * rng.standard_normal((5, 4))
    np.testing.assert_allclose(svt(M, 0.0), M, rtol=0, atol=1e-14)
    top = np.linalg.svd(M, compute_uv=False)[0]
    np.testing.assert_allclose(svt(M, top + 1.0), np.zeros_like(M),
                               rtol=0, atol=1e-14)


def test_svt_diagonal_case_and_rank_cap():
    M = np.diag([3.0, 1.0])
    np.testing.assert_allclose(svt(M, 2.0), np.diag([1.0, 0.0]), atol=1e-14)
    M = np.diag([5.0, 4.0, 3.0])
    capped = svt(M, 1.0, rank_cap=2)
    np.testing.assert_allclose(capped, np.diag([4.0, 3.0, 0.0]), atol=1e-14)
    with pytest.raises(ValueError):
        svt(M, -1.0)


# ---------------------------------------------------------------- nuclear norm

def test_nuclear_norm_values():
    rng = np.random.default_rng(1)
    u = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    u /= np.linalg.norm(u)
    v /= np.linalg.norm(v)
    assert abs(nuclear_norm(np.outer(u, v.conj())) - 1.0) < 1e-12

    Z = np.zeros((4, 5))
    Z[0, 0], Z[1, 1] = 2.0, 3.0
    assert abs(nuclear_norm(Z) - 5.0) < 1e-12

    M = rng.standard_normal((7, 5))
    sv = np.linalg.svd(M, compute_uv=False)
    assert nuclear_norm(M) >= np.linalg.norm(M) - 1e-12
    assert np.linalg.norm(M) >= sv[0] - 1e-12


# ---------------------------------------------------------------- config

def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(rho=0.0)
    with pytest.raises(ValueError):
        SolverConfig(tol_rel=0.0)
    with pytest.raises(ValueError):
        SolverConfig(max_iters=0)


# ---------------------------------------------------------------- solve

def _instance(n, s, r, seed):
    model = sample_model(r, s, seed=seed)
    B = sample_subspace("gaussian", n, s, seed=seed + 1000)
    X = synthesize_data_matrix(model, n)
    return model, B, X, apply_measurement(X, B)


def test_solve_zero_data():
    shape = LiftShape.default(12, 2)
    B = sample_subspace("gaussian", 12, 2, seed=3)
    rep = solve_vhl(np.zeros(12), B, shape)
    assert rep.converged and rep.iters <= 2
    assert rep.nuclear_norm == 0.0
    np.testing.assert_array_equal(rep.X_hat, np.zeros((2, 12)))


def test_solve_small_exact_recovery():
    _, B, X, y = _instance(16, 2, 1, seed=0)
    rep = solve_vhl(y, B, LiftShape.default(16, 2))
    assert rep.converged
    assert np.linalg.norm(rep.X_hat - X) / np.linalg.norm(X) < 1e-3


def test_solve_midsize_instance():
    _, B, X, y = _instance(64, 3, 4, seed=5)
    shape = LiftShape.default(64, 3)
    rep = solve_vhl(y, B, shape)
    assert rep.converged
    assert np.linalg.norm(rep.X_hat - X) / np.linalg.norm(X) < 1e-3
    # the truth is feasible, so the minimizer cannot beat it by more than slack
    assert rep.nuclear_norm <= nuclear_norm(vec_hankel(X, shape)) * (1 + 1e-6)


def test_solution_always_feasible():
    rng = np.random.default_rng(7)
    for trial in range(5):
        n = int(rng.integers(8, 33))
        s = int(rng.integers(1, 4))
        r = int(rng.integers(1, 3))
        _, B, X, y = _instance(n, s, r, seed=200 + trial)
        rep = solve_vhl(y, B, LiftShape.default(n, s),
                        SolverConfig(max_iters=20))
        resid = apply_measurement(rep.X_hat, B) - y
        assert np.max(np.abs(resid)) < 1e-10


def test_merit_windows_catch_divergence_not_transients():
    _, B, X, y = _instance(64, 3, 4, seed=5)
    rep = solve_vhl(y, B, LiftShape.default(64, 3), keep_history=True)
    merit = np.maximum(rep.primal_history, rep.dual_history)
    # skip the first few iterations; the dual variable starts at zero and
    # the residual scalings are not yet meaningful there
    for t in range(60, len(merit)):
        assert merit[t] <= merit[t - 50] * 1.000001 + 1e-12


def test_degenerate_fully_constrained():
    rng = np.random.default_rng(9)
    y = rng.standard_normal(10) + 1j * rng.standard_normal(10)
    B = np.ones((10, 1), dtype=complex)
    shape = LiftShape.default(10, 1)
    one = solve_vhl(y, B, shape, SolverConfig(max_iters=1))
    np.testing.assert_allclose(one.X_hat, y[None, :], rtol=0, atol=1e-12)
    full = solve_vhl(y, B, shape)
    assert full.converged
    np.testing.assert_allclose(full.X_hat, y[None, :], rtol=0, atol=1e-12)


def test_solver_error_paths():
    shape = LiftShape.default(8, 2)
    B = sample_subspace("gaussian", 8, 2, seed=1).entries.copy()
    B[3, :] = 0.0
    with pytest.raises(ValueError):
        solve_vhl(np.zeros(8), B, shape)
    with pytest.raises(ValueError):
        solve_vhl(np.zeros(7), sample_subspace("gaussian", 8, 2, seed=1), shape)
    with pytest.raises(ValueError):
        solve_vhl(np.zeros(8), sample_subspace("gaussian", 9, 2, seed=1), shape)


def test_nonconvergence_reported_not_raised():
    _, B, X, y = _instance(32, 2, 2, seed=11)
    rep = solve_vhl(y, B, LiftShape.default(32, 2), SolverConfig(max_iters=3))
    assert not rep.converged
    assert rep.iters == 3
    assert max(rep.primal_residual, rep.dual_residual) > 1e-7


def test_report_round_trip_dict():
    _, B, X, y = _instance(16, 2, 1, seed=0)
    rep = solve_vhl(y, B, LiftShape.default(16, 2))
    doc = report_to_dict(rep)
    assert doc["converged"] is True
    assert doc["s"] == 2 and doc["n"] == 16
    flat = np.array([complex(a, b) for a, b in doc["X_hat"]])
    np.testing.assert_array_equal(flat.reshape((2, 16), order="F"), rep.X_hat)
