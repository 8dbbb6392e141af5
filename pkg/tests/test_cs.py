import math

import numpy as np
import pytest

from proxlab import (
    InfeasibleProblemError,
    InvalidParameterError,
    bp_denoise,
    bp_sigma_general,
    gaussian_matrix,
    haar_forward,
    haar_inverse,
    ista_qp,
    pg_ls,
    project_l1_ball,
    soft_threshold,
)


# ------------------------------------------------------------------ matrix

def test_gaussian_matrix_column_norms_concentrate():
    A = gaussian_matrix(200, 150, seed=1)
    norms_sq = (A**2).sum(axis=0)
    assert 0.8 <= norms_sq.mean() <= 1.2


def test_gaussian_matrix_deterministic():
    np.testing.assert_array_equal(gaussian_matrix(7, 9, 5), gaussian_matrix(7, 9, 5))


def test_gaussian_matrix_scalar():
    A = gaussian_matrix(1, 1, 3)
    assert A.shape == (1, 1)


# -------------------------------------------------------------------- haar

def test_haar_constant_signal():
    a = 1.7
    np.testing.assert_allclose(haar_forward([a, a, a, a]), [2 * a, 0, 0, 0], atol=1e-14)


def test_haar_base_case():
    a, b = 3.0, -1.0
    np.testing.assert_allclose(
        haar_forward([a, b]), [(a + b) / math.sqrt(2), (a - b) / math.sqrt(2)]
    )


@pytest.mark.parametrize("n", [2, 4, 8, 16, 64, 256, 1024, 4096])
def test_haar_roundtrip_and_parseval(n):
    rng = np.random.default_rng(n)
    x = rng.standard_normal(n)
    w = haar_forward(x)
    np.testing.assert_allclose(haar_inverse(w), x, atol=1e-12)
    assert np.linalg.norm(w) == pytest.approx(np.linalg.norm(x), abs=1e-12)


def test_haar_rejects_bad_length():
    with pytest.raises(InvalidParameterError):
        haar_forward([1.0, 2.0, 3.0])


# -------------------------------------------------------------------- ista

def test_ista_identity_reduces_to_soft_threshold():
    rng = np.random.default_rng(4)
    y = rng.standard_normal(24)
    rep = ista_qp(np.eye(24), y, 0.35, max_iter=500, tol=1e-16)
    np.testing.assert_allclose(rep.solution, soft_threshold(y, 0.35), atol=1e-10)


def test_ista_large_penalty_gives_zero():
    rng = np.random.default_rng(8)
    A = gaussian_matrix(10, 20, 2)
    y = rng.standard_normal(10)
    lam = float(np.abs(A.T @ y).max()) * 1.01
    rep = ista_qp(A, y, lam)
    np.testing.assert_array_equal(rep.solution, np.zeros(20))
    assert rep.converged


def test_ista_orthonormal_closed_form():
    n = 32
    W = np.column_stack([haar_forward(e) for e in np.eye(n)])
    A = W.T  # synthesis operator: A @ w == haar_inverse(w)
    rng = np.random.default_rng(12)
    y = rng.standard_normal(n)
    lam = 0.4
    rep = ista_qp(A, y, lam, max_iter=5000, tol=1e-16)
    np.testing.assert_allclose(rep.solution, soft_threshold(W @ y, lam), atol=1e-6)


def test_ista_objective_monotone():
    A = gaussian_matrix(30, 60, 7)
    y = np.random.default_rng(7).standard_normal(30)
    for accelerate in (False, True):
        rep = ista_qp(A, y, 0.05, max_iter=300, tol=0.0, track_objective=True,
                      accelerate=accelerate)
        hist = np.array(rep.objective_history)
        assert np.all(np.diff(hist) <= 1e-9)


# ------------------------------------------------------------------- pg_ls

def test_pg_identity_reduces_to_projection():
    rng = np.random.default_rng(3)
    y = rng.standard_normal(40)
    tau = 0.4 * np.abs(y).sum()
    rep = pg_ls(np.eye(40), y, tau, max_iter=2000, tol=1e-16)
    np.testing.assert_allclose(rep.solution, project_l1_ball(y, tau), atol=1e-8)


def test_pg_zero_radius():
    A = gaussian_matrix(5, 12, 0)
    rep = pg_ls(A, np.ones(5), 0.0)
    np.testing.assert_array_equal(rep.solution, np.zeros(12))


def test_pg_iterates_feasible_and_objective_monotone():
    A = gaussian_matrix(20, 50, 5)
    y = np.random.default_rng(5).standard_normal(20)
    rep = pg_ls(A, y, 1.5, max_iter=400, tol=0.0, track_objective=True)
    assert np.abs(rep.solution).sum() <= 1.5 * (1 + 1e-12)
    hist = np.array(rep.objective_history)
    assert np.all(np.diff(hist) <= 1e-9)


def test_pg_noiseless_exact_recovery():
    # Long-run iteration on a small noiseless instance recovers the signal.
    A = gaussian_matrix(8, 16, 0)
    x0 = np.zeros(16)
    x0[[3, 11]] = [1.0, -2.0]
    y = A @ x0
    rep = pg_ls(A, y, float(np.abs(x0).sum()), max_iter=50_000, tol=0.0)
    assert np.linalg.norm(rep.solution - x0) <= 1e-4


# --------------------------------------------------------------- bp general

def test_bp_general_identity_reduction():
    rng = np.random.default_rng(31)
    y = rng.standard_normal(32)
    sigma = 0.4 * np.linalg.norm(y)
    rep = bp_sigma_general(np.eye(32), y, sigma, tol=1e-8)
    np.testing.assert_allclose(rep.solution, bp_denoise(y, sigma), atol=1e-6)


def test_bp_general_origin_feasible():
    rng = np.random.default_rng(32)
    A = gaussian_matrix(6, 10, 1)
    y = rng.standard_normal(6)
    rep = bp_sigma_general(A, y, np.linalg.norm(y) * 1.01)
    np.testing.assert_array_equal(rep.solution, np.zeros(10))


def test_bp_general_infeasible_radius():
    # Overdetermined consistent-system floor: sigma below it must be refused.
    A = gaussian_matrix(12, 4, 2)
    y = np.random.default_rng(2).standard_normal(12)
    floor = np.linalg.norm(y - A @ np.linalg.lstsq(A, y, rcond=None)[0])
    with pytest.raises(InfeasibleProblemError):
        bp_sigma_general(A, y, 0.5 * floor)


def test_bp_general_cs_recovery():
    A = gaussian_matrix(100, 400, 21)
    x0 = np.zeros(400)
    x0[:5] = np.array([1.0, -1.2, 0.8, 1.5, -0.7])
    eta = 0.05
    z = np.random.default_rng(0).standard_normal(100)
    y = A @ x0 + eta * z
    rep = bp_sigma_general(A, y, eta * math.sqrt(100), max_iter=4000)
    assert np.linalg.norm(rep.solution - x0) / np.linalg.norm(x0) <= 0.2


# -------------------------------------------------- identity reductions

def test_all_solvers_identity_reduction_random():
    rng = np.random.default_rng(100)
    for _ in range(20):
        n = int(rng.integers(2, 128))
        y = rng.standard_normal(n) * rng.uniform(0.3, 3)
        eye = np.eye(n)
        lam = rng.uniform(0.05, 1.0)
        np.testing.assert_allclose(
            ista_qp(eye, y, lam, max_iter=1000, tol=1e-16).solution,
            soft_threshold(y, lam), atol=1e-6)
        tau = rng.uniform(0.2, 0.9) * np.abs(y).sum()
        np.testing.assert_allclose(
            pg_ls(eye, y, tau, max_iter=4000, tol=1e-16).solution,
            project_l1_ball(y, tau), atol=1e-6)
        sigma = rng.uniform(0.2, 0.9) * np.linalg.norm(y)
        np.testing.assert_allclose(
            bp_sigma_general(eye, y, sigma, tol=1e-8).solution,
            bp_denoise(y, sigma), atol=1e-6)
