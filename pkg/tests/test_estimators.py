import numpy as np
import pytest
from sklearn.base import clone
from sklearn.pipeline import Pipeline

from proxlab import (
    GeneralizedLasso,
    InvalidParameterError,
    ProgramSpec,
    ProximalDenoiser,
    gaussian_matrix,
    ista_qp,
    solve_pd,
)


def test_denoiser_params_roundtrip_and_clone():
    est = ProximalDenoiser(program="ls", param=2.5)
    assert est.get_params() == {"program": "ls", "param": 2.5}
    est2 = clone(est).set_params(param=1.0)
    assert est2.get_params()["param"] == 1.0


def test_denoiser_transform_matches_solver():
    rng = np.random.default_rng(0)
    X = rng.standard_normal((5, 12))
    for program, param in [("ls", 1.5), ("qp", 0.3), ("bp", 1.0)]:
        est = ProximalDenoiser(program=program, param=param).fit(X)
        out = est.transform(X)
        spec = ProgramSpec(program, param)
        for row_in, row_out in zip(X, out):
            np.testing.assert_array_equal(row_out, solve_pd(spec, row_in))


def test_denoiser_in_pipeline():
    rng = np.random.default_rng(1)
    X = rng.standard_normal((4, 8))
    pipe = Pipeline([("denoise", ProximalDenoiser(program="qp", param=0.2))])
    out = pipe.fit_transform(X)
    assert out.shape == X.shape


def test_denoiser_validation():
    est = ProximalDenoiser(program="qp", param=0.2)
    with pytest.raises(InvalidParameterError):
        est.fit(np.ones(3))  # 1-d input
    est.fit(np.ones((2, 3)))
    with pytest.raises(InvalidParameterError):
        est.transform(np.ones((2, 4)))  # feature mismatch
    with pytest.raises(InvalidParameterError):
        ProximalDenoiser(program="nope", param=1.0).fit(np.ones((1, 2)))


def test_generalized_lasso_matches_ista():
    A = gaussian_matrix(30, 80, 3)
    rng = np.random.default_rng(3)
    x0 = np.zeros(80)
    x0[:3] = [2.0, -1.0, 1.5]
    y = A @ x0 + 0.01 * rng.standard_normal(30)
    est = GeneralizedLasso(program="qp", param=0.05, max_iter=2000, tol=1e-14).fit(A, y)
    ref = ista_qp(A, y, 0.05, max_iter=2000, tol=1e-14)
    np.testing.assert_allclose(est.coef_, ref.solution, atol=1e-12)
    np.testing.assert_allclose(est.predict(A), A @ est.coef_)
    assert est.n_iter_ == ref.iterations


def test_generalized_lasso_recovers_sparse_signal():
    A = gaussian_matrix(60, 120, 9)
    x0 = np.zeros(120)
    x0[[5, 40, 90]] = [1.0, -2.0, 1.5]
    y = A @ x0
    est = GeneralizedLasso(program="ls", param=float(np.abs(x0).sum()),
                           max_iter=30_000, tol=0.0).fit(A, y)
    assert np.linalg.norm(est.coef_ - x0) <= 1e-3


def test_generalized_lasso_bp_mode():
    A = gaussian_matrix(40, 100, 4)
    rng = np.random.default_rng(4)
    x0 = np.zeros(100)
    x0[:4] = [1.0, 1.0, -1.0, 2.0]
    eta = 0.05
    y = A @ x0 + eta * rng.standard_normal(40)
    est = GeneralizedLasso(program="bp", param=eta * np.sqrt(40), max_iter=4000).fit(A, y)
    assert np.linalg.norm(y - est.predict(A)) == pytest.approx(eta * np.sqrt(40), rel=0.05)
