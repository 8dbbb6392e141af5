"""Exact solvers for the three l1 proximal-denoising programs.

All three programs observe ``y = x0 + noise`` through the identity and
differ only in how the l1/l2 trade-off is parametrized:

* ``ls`` -- least squares constrained to an l1 ball of radius ``tau``,
  solved by orthogonal projection;
* ``qp`` -- quadratic penalty ``0.5*||y - x||^2 + t*||x||_1``, solved by
  soft thresholding with threshold ``t``;
* ``bp`` -- minimal l1 norm subject to ``||y - x||_2 <= sigma``.

Every solver is an exact finite algorithm (sorting plus a scalar solve on
a piecewise polynomial); nothing here iterates to a tolerance.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, InvalidParameterError
from .validation import as_vector, check_nonneg, check_positive

__all__ = [
    "PROGRAMS",
    "ProgramSpec",
    "soft_threshold",
    "project_l1_ball",
    "bp_denoise",
    "solve_pd",
    "equivalence_map",
    "project_shifted",
    "descent_cone_member",
]

#: Recognized program kinds: l1-ball-constrained LS, penalized QP, residual-constrained BP.
PROGRAMS = ("ls", "qp", "bp")


@dataclass(frozen=True)
class ProgramSpec:
    """One denoising program together with its governing parameter.

    ``param`` is the l1 radius for ``ls``, the soft threshold for ``qp``
    and the residual radius for ``bp``, always in signal units.
    """

    kind: str
    param: float

    def __post_init__(self):
        if self.kind not in PROGRAMS:
            raise InvalidParameterError(f"unknown program kind {self.kind!r}, expected one of {PROGRAMS}")
        object.__setattr__(self, "param", check_nonneg(self.param, "param"))


def soft_threshold(y, t):
    """Shrink every entry of ``y`` toward zero by ``t``.

    Returns ``sign(y) * max(|y| - t, 0)`` elementwise; this is the exact
    minimizer of ``0.5*||y - x||^2 + t*||x||_1``.
    """
    y = as_vector(y, "y")
    t = check_nonneg(t, "t")
    return np.sign(y) * np.maximum(np.abs(y) - t, 0.0)


def _simplex_threshold(a, radius):
    # a: magnitudes with sum(a) > radius > 0; returns the unique theta > 0
    # with sum(max(a - theta, 0)) == radius (exact pivot search on sorted a).
    u = np.sort(a)[::-1]
    css = np.cumsum(u)
    k = np.arange(1, u.size + 1)
    pivot = np.nonzero(u > (css - radius) / k)[0][-1]
    return (css[pivot] - radius) / (pivot + 1)


def project_l1_ball(y, tau):
    """Orthogonal projection of ``y`` onto the l1 ball of radius ``tau``.

    If ``||y||_1 <= tau`` the input is returned unchanged; otherwise the
    result is ``soft_threshold(y, t*)`` for the unique ``t* > 0`` at which
    the shrunken vector has l1 norm exactly ``tau``.
    """
    y = as_vector(y, "y")
    tau = check_nonneg(tau, "tau")
    if tau == 0.0:
        return np.zeros_like(y)
    a = np.abs(y)
    if a.sum() <= tau:
        return y.copy()
    theta = _simplex_threshold(a, tau)
    return np.sign(y) * np.maximum(a - theta, 0.0)


def _sorted_squares(y):
    # Ascending magnitudes and prefix sums of their squares; shared by the
    # scalar residual solves below.
    a = np.sort(np.abs(y))
    presq = np.concatenate(([0.0], np.cumsum(a * a)))
    return a, presq


def _residual_threshold(a, presq, sigma):
    # Smallest t >= 0 with ||y - soft_threshold(y, t)||_2 = sigma, given the
    # sorted magnitudes a (ascending) and prefix sums of squares presq.
    # The squared residual is piecewise quadratic in t with breakpoints at
    # the magnitudes: r^2(t) = presq[k] + (n - k) t^2 for t in [a[k-1], a[k]].
    n = a.size
    target = sigma * sigma
    ks = np.arange(n)
    r2_at_break = presq[1:] + (n - ks - 1) * a * a
    k = int(np.searchsorted(r2_at_break, target))
    t = np.sqrt(max(target - presq[k], 0.0) / (n - k))
    return t


def _bisect_residual(y, sigma, lo, hi):
    # Fallback for a numerically degraded closed-form interval solve.
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if np.linalg.norm(y - soft_threshold(y, mid)) < sigma:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-12:
            break
    return 0.5 * (lo + hi)


def bp_denoise(y, sigma):
    """Minimal-l1 vector within l2 distance ``sigma`` of ``y``.

    Returns the zero vector when ``||y||_2 <= sigma`` (the origin is
    feasible and has minimal norm).  Otherwise the solution is
    ``soft_threshold(y, t*)`` with ``t*`` the root of the increasing map
    ``t -> ||y - soft_threshold(y, t)||_2 - sigma``, located exactly on its
    piecewise-quadratic representation.
    """
    y = as_vector(y, "y")
    sigma = check_nonneg(sigma, "sigma")
    if np.linalg.norm(y) <= sigma:
        return np.zeros_like(y)
    if sigma == 0.0:
        return y.copy()
    a, presq = _sorted_squares(y)
    t = _residual_threshold(a, presq, sigma)
    out = soft_threshold(y, t)
    if abs(np.linalg.norm(y - out) - sigma) > 1e-10 * max(1.0, sigma):
        t = _bisect_residual(y, sigma, 0.0, a[-1])
        out = soft_threshold(y, t)
    return out


def solve_pd(spec, y):
    """Solve one proximal-denoising program; dispatches on ``spec.kind``."""
    if spec.kind == "ls":
        return project_l1_ball(y, spec.param)
    if spec.kind == "qp":
        return soft_threshold(y, spec.param)
    return bp_denoise(y, spec.param)


def equivalence_map(y, lam):
    """Parameters at which all three programs share the QP solution.

    Solves the penalized program at threshold ``lam`` and returns
    ``(tau, sigma, xsharp)`` where ``tau = ||xsharp||_1`` and
    ``sigma = ||y - xsharp||_2``; projecting onto the ``tau`` ball and
    solving the ``sigma`` residual program both reproduce ``xsharp``.
    Rejected when the threshold kills every coordinate (``tau == 0``), where
    the residual program's minimizer stops being unique in a testable way.
    """
    y = as_vector(y, "y")
    lam = check_positive(lam, "lam")
    if not np.any(y):
        raise DegenerateInputError("equivalence_map requires a nonzero input vector")
    xsharp = soft_threshold(y, lam)
    tau = float(np.abs(xsharp).sum())
    if tau == 0.0:
        raise DegenerateInputError(
            "threshold removes every coordinate (lam >= max|y|); the map is degenerate at tau = 0"
        )
    sigma = float(np.linalg.norm(y - xsharp))
    return tau, sigma, xsharp


def project_shifted(z, x0, tau):
    """Projection of ``z`` onto ``tau * (B1 - x0)`` for a unit-ball center ``x0``.

    Requires ``||x0||_1 <= 1`` so that the shifted ball contains the origin;
    computed as ``project_l1_ball(z + tau*x0, tau) - tau*x0``.
    """
    z = as_vector(z, "z")
    x0 = as_vector(x0, "x0")
    tau = check_nonneg(tau, "tau")
    if z.size != x0.size:
        raise InvalidParameterError("z and x0 must have the same length")
    if np.abs(x0).sum() > 1.0 + 1e-12:
        raise InvalidParameterError("||x0||_1 must not exceed 1 (the shifted set must contain 0)")
    return project_l1_ball(z + tau * x0, tau) - tau * x0


def descent_cone_member(x, h, tol=1e-12):
    """Whether ``h`` points into the l1 ball of radius ``||x||_1`` at ``x``.

    Uses the support characterization: ``h`` is a tangent direction iff the
    off-support l1 mass of ``h`` is at most ``-<sign(x), h>``.
    """
    x = as_vector(x, "x")
    h = as_vector(h, "h")
    if x.size != h.size:
        raise InvalidParameterError("x and h must have the same length")
    support = x != 0.0
    if not support.any():
        raise DegenerateInputError("descent cone is undefined at the zero vector")
    off_mass = np.abs(h[~support]).sum()
    return bool(off_mass <= -np.dot(np.sign(x[support]), h[support]) + tol)
