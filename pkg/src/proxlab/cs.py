"""Generalized-Lasso solvers for dense measurement matrices, plus 1D Haar.

The three identity-matrix programs generalize to ``y = A x + noise``:
penalized least squares (solved by ISTA), l1-ball-constrained least squares
(projected gradient) and the residual-constrained program (outer bisection
on the penalty weight).  With ``A = I`` each reduces to its exact
counterpart in :mod:`proxlab.prox`, which the tests pin down.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InfeasibleProblemError, InvalidParameterError, SolverDivergenceError
from .prox import project_l1_ball, soft_threshold
from .validation import as_vector, check_nonneg, check_power_of_two

__all__ = [
    "SolverReport",
    "gaussian_matrix",
    "haar_forward",
    "haar_inverse",
    "ista_qp",
    "pg_ls",
    "bp_sigma_general",
]


@dataclass
class SolverReport:
    """Outcome of one iterative solve."""

    solution: np.ndarray
    iterations: int
    final_objective: float
    converged: bool
    objective_history: list = field(default_factory=list)


def gaussian_matrix(m, n, seed):
    """Dense matrix with iid normal entries of variance ``1/m``."""
    m = int(m)
    n = int(n)
    if m < 1 or n < 1:
        raise InvalidParameterError("matrix dimensions must be positive")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    return rng.standard_normal((m, n)) / math.sqrt(m)


def haar_forward(x):
    """Orthonormal 1D Haar analysis of a power-of-two-length signal.

    Layout: final approximation coefficient first, then detail bands from
    coarsest to finest.  Inverse of :func:`haar_inverse`; preserves the l2
    norm exactly up to roundoff.
    """
    x = as_vector(x, "x")
    n = check_power_of_two(x.size)
    out = x.copy()
    length = n
    root2 = math.sqrt(2.0)
    while length > 1:
        half = length // 2
        ev = out[0:length:2].copy()
        od = out[1:length:2].copy()
        out[:half] = (ev + od) / root2
        out[half:length] = (ev - od) / root2
        length = half
    return out


def haar_inverse(w):
    """Orthonormal 1D Haar synthesis; inverse of :func:`haar_forward`."""
    w = as_vector(w, "w")
    n = check_power_of_two(w.size)
    out = w.copy()
    length = 2
    root2 = math.sqrt(2.0)
    while length <= n:
        half = length // 2
        s = out[:half].copy()
        d = out[half:length].copy()
        out[0:length:2] = (s + d) / root2
        out[1:length:2] = (s - d) / root2
        length *= 2
    return out


def _as_matrix(a):
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or not np.all(np.isfinite(a)):
        raise InvalidParameterError("A must be a finite 2-d array")
    return a


def _op_norm_sq(a, iters=50):
    # Power iteration on A^T A from a deterministic start, inflated 5% so
    # that 1/L is a guaranteed-descent step size.
    v = np.ones(a.shape[1]) / math.sqrt(a.shape[1])
    for _ in range(iters):
        w = a.T @ (a @ v)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 1e-12
        v = w / nw
    return 1.05 * float(v @ (a.T @ (a @ v)))


def ista_qp(A, y, lam, max_iter=1000, tol=1e-12, x0=None, track_objective=False,
            accelerate=False, gap_tol=None):
    """Penalized least squares ``0.5*||y - Ax||^2 + lam*||x||_1`` via ISTA.

    Fixed step ``1/L`` with ``L`` a safely inflated operator-norm estimate;
    the objective never increases (an increase beyond 1e-9 aborts), and the
    loop stops once the relative objective decrease drops below ``tol``.
    With ``accelerate=True`` a momentum candidate is tried first and kept
    only if it still descends, so the monotonicity and stopping contracts
    are unchanged while convergence is much faster.  If ``gap_tol`` is set,
    convergence additionally requires the lasso duality gap to drop below
    it, which certifies ``||Ax - Ax*||^2 <= 2*gap_tol``.
    """
    A = _as_matrix(A)
    y = as_vector(y, "y")
    lam = check_nonneg(lam, "lam")
    if A.shape[0] != y.size:
        raise InvalidParameterError("A and y have incompatible shapes")
    L = max(_op_norm_sq(A), 1e-12)
    half_ysq = 0.5 * float(y @ y)

    def prox_step(point):
        grad = A.T @ (A @ point - y)
        xn = soft_threshold(point - grad / L, lam / L)
        rn = A @ xn - y
        return xn, rn, 0.5 * float(rn @ rn) + lam * float(np.abs(xn).sum())

    def duality_gap(xv, rv, obj_v):
        # Scale the residual into the dual-feasible slab ||A^T u||_inf <= lam.
        corr = float(np.abs(A.T @ rv).max())
        scale = 1.0 if corr <= lam or corr == 0.0 else lam / corr
        dual = half_ysq - 0.5 * float(np.sum((y + scale * rv) ** 2))
        return obj_v - dual

    x = np.zeros(A.shape[1]) if x0 is None else as_vector(x0, "x0").copy()
    resid = A @ x - y
    obj = 0.5 * float(resid @ resid) + lam * float(np.abs(x).sum())
    history = [obj]
    momentum = x.copy()
    t_mom = 1.0
    converged = False
    it = 0
    for it in range(1, int(max_iter) + 1):
        if accelerate:
            cand, resid_cand, obj_cand = prox_step(momentum)
            if obj_cand <= obj:
                x_new, resid_new, obj_new = cand, resid_cand, obj_cand
            else:
                x_new, resid_new, obj_new = prox_step(x)
            t_new = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * t_mom * t_mom))
            momentum = x_new + ((t_mom - 1.0) / t_new) * (x_new - x)
            t_mom = t_new
        else:
            x_new, resid_new, obj_new = prox_step(x)
        if obj_new > obj + 1e-9:
            raise SolverDivergenceError(f"objective increased at iteration {it}")
        drop = (obj - obj_new) / max(obj, 1e-300)
        x, resid, obj = x_new, resid_new, obj_new
        if track_objective:
            history.append(obj)
        if drop < tol:
            if gap_tol is None or duality_gap(x, resid, obj) <= gap_tol:
                converged = True
                break
    return SolverReport(
        solution=x,
        iterations=it,
        final_objective=obj,
        converged=converged,
        objective_history=history if track_objective else [],
    )


def pg_ls(A, y, tau, max_iter=1000, tol=1e-12, x0=None, track_objective=False):
    """Least squares over the l1 ball of radius ``tau`` via projected gradient.

    Every iterate is feasible; stops on relative objective stagnation below
    ``tol`` (objective ``0.5*||y - Ax||^2``).
    """
    A = _as_matrix(A)
    y = as_vector(y, "y")
    tau = check_nonneg(tau, "tau")
    if A.shape[0] != y.size:
        raise InvalidParameterError("A and y have incompatible shapes")
    L = max(_op_norm_sq(A), 1e-12)
    x = project_l1_ball(np.zeros(A.shape[1]) if x0 is None else as_vector(x0, "x0"), tau)
    resid = A @ x - y
    obj = 0.5 * float(resid @ resid)
    history = [obj]
    converged = False
    it = 0
    for it in range(1, int(max_iter) + 1):
        x_new = project_l1_ball(x - (A.T @ resid) / L, tau)
        resid_new = A @ x_new - y
        obj_new = 0.5 * float(resid_new @ resid_new)
        if obj_new > obj + 1e-9:
            raise SolverDivergenceError(f"objective increased at iteration {it}")
        drop = (obj - obj_new) / max(obj, 1e-300)
        x, resid, obj = x_new, resid_new, obj_new
        if track_objective:
            history.append(obj)
        if drop < tol:
            converged = True
            break
    return SolverReport(
        solution=x,
        iterations=it,
        final_objective=obj,
        converged=converged,
        objective_history=history if track_objective else [],
    )


def bp_sigma_general(A, y, sigma, max_iter=2000, tol=1e-4, inner_tol=1e-14):
    """Minimal l1 norm subject to ``||y - Ax||_2 <= sigma``.

    Outer bisection on the penalty weight: the penalized residual norm is
    nondecreasing in the weight, so the weight matching ``sigma`` (to
    relative ``tol``) is bracketed and refined, warm-starting the inner
    ISTA solves.  Flat stretches are resolved toward the smaller weight.
    """
    A = _as_matrix(A)
    y = as_vector(y, "y")
    sigma = check_nonneg(sigma, "sigma")
    if A.shape[0] != y.size:
        raise InvalidParameterError("A and y have incompatible shapes")
    n = A.shape[1]
    ynorm = float(np.linalg.norm(y))
    if ynorm <= sigma:
        return SolverReport(np.zeros(n), 0, 0.0, True)
    lstsq_sol = np.linalg.lstsq(A, y, rcond=None)[0]
    floor = float(np.linalg.norm(y - A @ lstsq_sol))
    if sigma < floor * (1.0 - 1e-9) - 1e-12:
        raise InfeasibleProblemError(
            f"sigma={sigma:.6g} is below the least-squares residual floor {floor:.6g}"
        )

    total_iters = 0
    # Certify enough inner accuracy that the residual read-out is trustworthy
    # well inside the outer matching tolerance.
    gap_tol = 0.5 * (0.2 * tol * max(sigma, 1e-12)) ** 2

    def solve_at(lam, warm):
        nonlocal total_iters
        rep = ista_qp(A, y, lam, max_iter=max_iter, tol=inner_tol, x0=warm,
                      accelerate=True, gap_tol=gap_tol)
        total_iters += rep.iterations
        return rep.solution, float(np.linalg.norm(y - A @ rep.solution))

    # Continuation: halve the weight with warm starts until the residual
    # drops through sigma; the previous weight then caps the bracket.
    lam_hi = max(float(np.abs(A.T @ y).max()), 1e-300)
    x_hi, res_hi = np.zeros(n), ynorm
    lam_lo = lam_hi
    x_lo, res_lo = x_hi, res_hi
    for _ in range(120):
        lam_hi, x_hi, res_hi = lam_lo, x_lo, res_lo
        lam_lo /= 2.0
        x_lo, res_lo = solve_at(lam_lo, x_lo)
        if res_lo <= sigma:
            break
    else:
        raise SolverDivergenceError("failed to bracket the target residual from below")

    # Log-space bisection: the matching weight can sit many decades below
    # the bracketing endpoint.  The bracket floor scales with the requested
    # match so tight tolerances translate into tight weights.
    bracket_floor = min(1e-9, 1e-2 * tol)
    while lam_hi / lam_lo > 1.0 + bracket_floor:
        lam_mid = math.sqrt(lam_lo * lam_hi)
        x_mid, res_mid = solve_at(lam_mid, x_lo)
        if res_mid > sigma:
            lam_hi, x_hi, res_hi = lam_mid, x_mid, res_mid
        else:
            lam_lo, x_lo, res_lo = lam_mid, x_mid, res_mid
        if abs(res_lo - sigma) <= 0.5 * tol * sigma:
            break

    # Prefer the smaller weight if it already meets the residual target.
    if abs(res_lo - sigma) <= tol * sigma:
        x, res = x_lo, res_lo
    elif abs(res_hi - sigma) <= tol * sigma:
        x, res = x_hi, res_hi
    else:
        raise SolverDivergenceError(
            f"bisection stalled: residuals ({res_lo:.6g}, {res_hi:.6g}) straddle "
            f"sigma={sigma:.6g} beyond relative tolerance {tol:g}"
        )
    return SolverReport(x, total_iters, float(np.abs(x).sum()), True)
