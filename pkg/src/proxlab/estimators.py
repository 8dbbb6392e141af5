"""Scikit-learn style wrappers around the exact and iterative solvers."""

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .cs import bp_sigma_general, ista_qp, pg_ls
from .errors import InvalidParameterError
from .prox import PROGRAMS, ProgramSpec, solve_pd

__all__ = ["ProximalDenoiser", "GeneralizedLasso"]


def _check_2d(X, name="X"):
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise InvalidParameterError(f"{name} must be 2-d (n_samples, n_features), got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise InvalidParameterError(f"{name} must have finite entries")
    return X


class ProximalDenoiser(TransformerMixin, BaseEstimator):
    """Row-wise identity-measurement denoiser.

    Parameters
    ----------
    program : {"ls", "qp", "bp"}
        Which program to solve: l1-ball projection, soft thresholding, or
        the residual-constrained minimal-l1 program.
    param : float
        The program's governing parameter (l1 radius, threshold, or
        residual radius) in signal units.
    """

    def __init__(self, program="qp", param=1.0):
        self.program = program
        self.param = param

    def fit(self, X, y=None):
        X = _check_2d(X)
        self._spec = ProgramSpec(self.program, self.param)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "_spec")
        X = _check_2d(X)
        if X.shape[1] != self.n_features_in_:
            raise InvalidParameterError(
                f"X has {X.shape[1]} features, the denoiser was fitted with {self.n_features_in_}"
            )
        return np.vstack([solve_pd(self._spec, row) for row in X])


class GeneralizedLasso(RegressorMixin, BaseEstimator):
    """Sparse linear regression under any of the three l1 formulations.

    ``fit(X, y)`` treats ``X`` as the measurement matrix and exposes the
    recovered coefficients as ``coef_``; ``predict`` applies the forward map.

    Parameters
    ----------
    program : {"ls", "qp", "bp"}
        Penalized ("qp", weight ``param``), l1-ball-constrained ("ls",
        radius ``param``) or residual-constrained ("bp", radius ``param``).
    param : float
        Governing parameter of the chosen program.
    max_iter : int
        Inner iteration budget.
    tol : float
        Stopping tolerance (relative objective decrease, or relative
        residual match for "bp").
    """

    def __init__(self, program="qp", param=1.0, max_iter=2000, tol=1e-12):
        self.program = program
        self.param = param
        self.max_iter = max_iter
        self.tol = tol

    def fit(self, X, y):
        X = _check_2d(X)
        y = np.asarray(y, dtype=np.float64).ravel()
        if y.size != X.shape[0]:
            raise InvalidParameterError("X and y have incompatible shapes")
        if self.program not in PROGRAMS:
            raise InvalidParameterError(f"unknown program {self.program!r}")
        if self.program == "qp":
            report = ista_qp(X, y, self.param, max_iter=self.max_iter, tol=self.tol)
        elif self.program == "ls":
            report = pg_ls(X, y, self.param, max_iter=self.max_iter, tol=self.tol)
        else:
            report = bp_sigma_general(X, y, self.param, max_iter=self.max_iter, tol=max(self.tol, 1e-6))
        self.coef_ = report.solution
        self.n_iter_ = report.iterations
        self.converged_ = report.converged
        self.objective_ = report.final_objective
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        check_is_fitted(self, "coef_")
        X = _check_2d(X)
        return X @ self.coef_
