"""Monte-Carlo experiment harness for the denoising programs.

Noise streams are counter-based: cell (i, j) of a sweep draws from a Philox
generator keyed by ``(master seed, lane, i, j)``, so results are bit-identical
no matter how many workers execute the cells or in which order.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import geometry
from .errors import DegenerateInputError, InvalidParameterError
from .prox import ProgramSpec, _residual_threshold, _sorted_squares, solve_pd, soft_threshold
from .risk import golden_section, lambda_bar, lambda_star
from .validation import as_vector, check_positive

__all__ = [
    "ProblemInstance",
    "SweepGrid",
    "SweepPoint",
    "RiskCurve",
    "make_instance",
    "loss",
    "sweep",
    "mc_risk",
    "optimal_param",
    "best_loss_vs_N",
]

# Stream lanes keep the independent RNG consumers off each other's keys.
_LANE_SWEEP = 0
_LANE_MC = 1
_LANE_SEARCH = 2
_LANE_EVENT = 3


def _rng(seed, lane, i, j):
    key = np.random.SeedSequence(entropy=int(seed), spawn_key=(lane, int(i), int(j)))
    return np.random.Generator(np.random.Philox(key))


def _event_seed(seed, lane, i, j):
    return np.random.SeedSequence(entropy=int(seed), spawn_key=(lane, int(i), int(j)))


@dataclass(frozen=True)
class ProblemInstance:
    """One denoising problem: ground truth, noise level and a master seed."""

    x0: np.ndarray
    s: int
    n: int
    eta: float
    seed: int

    def __post_init__(self):
        x0 = as_vector(self.x0, "x0")
        object.__setattr__(self, "x0", x0)
        if int(np.count_nonzero(x0)) > self.s:
            raise InvalidParameterError("x0 has more nonzeros than the declared sparsity")
        if x0.size != self.n:
            raise InvalidParameterError("x0 length disagrees with n")
        check_positive(self.eta, "eta")


@dataclass(frozen=True)
class SweepGrid:
    """Log-spaced grid of normalized parameters, symmetric about 1."""

    rho_values: np.ndarray
    n: int
    center: float = 1.0

    @classmethod
    def logspaced(cls, n, span):
        """Grid of ``n`` (odd) points covering ``[1/span, span]`` geometrically."""
        n = int(n)
        if n < 1 or n % 2 == 0:
            raise InvalidParameterError("grid size must be a positive odd integer")
        span = check_positive(span, "span")
        if span < 1.0:
            raise InvalidParameterError("span must be >= 1")
        exponents = np.linspace(-math.log10(span), math.log10(span), n)
        return cls(rho_values=10.0 ** exponents, n=n)

    def __post_init__(self):
        rho = as_vector(self.rho_values, "rho_values")
        if rho.size != self.n:
            raise InvalidParameterError("rho_values length disagrees with n")
        if np.any(rho <= 0) or np.any(np.diff(rho) < 0):
            raise InvalidParameterError("rho_values must be positive and sorted")
        object.__setattr__(self, "rho_values", rho)


@dataclass(frozen=True)
class SweepPoint:
    rho: float
    param_value: float
    mean_nnse: float
    stderr_nnse: float


@dataclass(frozen=True)
class RiskCurve:
    """Averaged loss along a normalized-parameter grid for one program."""

    program: str
    points: tuple
    k: int
    meta: dict = field(default_factory=dict)


def make_instance(s, n, eta, entry_scale=None, seed=0):
    """Ground truth with ``entry_scale`` (default ``n``) in the first ``s`` slots."""
    s = int(s)
    n = int(n)
    if n < 1 or s < 0 or s > n:
        raise InvalidParameterError(f"need 0 <= s <= n with n >= 1, got s={s}, n={n}")
    scale = float(n) if entry_scale is None else float(entry_scale)
    x0 = np.zeros(n)
    x0[:s] = scale
    return ProblemInstance(x0=x0, s=s, n=n, eta=float(eta), seed=int(seed))


def loss(program, inst, z):
    """Noise-normalized squared error of one solve on ``y = x0 + eta*z``."""
    z = as_vector(z, "z")
    if z.size != inst.n:
        raise InvalidParameterError("noise vector length disagrees with the instance")
    y = inst.x0 + inst.eta * z
    xhat = solve_pd(program, y)
    d = xhat - inst.x0
    return float(d @ d) / (inst.eta * inst.eta)


def _mean_stderr(values):
    values = np.asarray(values)
    mean = float(values.mean())
    stderr = float(values.std(ddof=1) / math.sqrt(values.size)) if values.size > 1 else 0.0
    return mean, stderr


def sweep(program_kind, grid, inst, k, rho_star, workers=None, share_noise=False):
    """Average loss over ``k`` fresh noise draws at every grid point.

    Cell (i, j) uses the stream keyed by ``(inst.seed, i, j)``; with
    ``share_noise=True`` the same k draws are reused across the grid
    (common random numbers) instead.
    """
    k = int(k)
    if k < 1:
        raise InvalidParameterError("k must be >= 1")
    rho_star = check_positive(rho_star, "rho_star")

    def eval_point(i):
        rho = float(grid.rho_values[i])
        spec = ProgramSpec(program_kind, rho * rho_star)
        losses = np.empty(k)
        for j in range(k):
            stream_i = 0 if share_noise else i
            z = _rng(inst.seed, _LANE_SWEEP, stream_i, j).standard_normal(inst.n)
            losses[j] = loss(spec, inst, z)
        mean, stderr = _mean_stderr(losses)
        return SweepPoint(rho=rho, param_value=spec.param, mean_nnse=mean, stderr_nnse=stderr)

    indices = range(grid.n)
    if workers is not None and workers > 1:
        with ThreadPoolExecutor(max_workers=int(workers)) as pool:
            points = tuple(pool.map(eval_point, indices))
    else:
        points = tuple(eval_point(i) for i in indices)
    meta = {"s": inst.s, "N": inst.n, "eta": inst.eta, "seed": inst.seed}
    return RiskCurve(program=program_kind, points=points, k=k, meta=meta)


def mc_risk(program_kind, param, inst, k):
    """Mean and standard error of the loss over ``k`` independent draws."""
    k = int(k)
    if k < 2:
        raise InvalidParameterError("k must be >= 2")
    spec = ProgramSpec(program_kind, param)
    losses = np.empty(k)
    for j in range(k):
        z = _rng(inst.seed, _LANE_MC, 0, j).standard_normal(inst.n)
        losses[j] = loss(spec, inst, z)
    return _mean_stderr(losses)


def _mc_param_search(program_kind, inst, seed_value, k_search, rel_tol):
    # Golden section on log-parameter with common random numbers; the cached
    # draws make candidate evaluations cheap and the ranking noise-free.
    draws = [
        _rng(inst.seed, _LANE_SEARCH, 0, j).standard_normal(inst.n) for j in range(k_search)
    ]

    def mean_loss(param):
        spec = ProgramSpec(program_kind, param)
        return float(np.mean([loss(spec, inst, z) for z in draws]))

    lo, hi = math.log(seed_value / 5.0), math.log(seed_value * 5.0)
    best = golden_section(lambda t: mean_loss(math.exp(t)), lo, hi, rel_tol)
    return math.exp(best)


def optimal_param(program_kind, inst, k_search=32, rel_tol=1e-3):
    """Risk-optimal governing parameter for the instance.

    The l1 radius is ``||x0||_1`` exactly.  The soft threshold comes from
    the closed-form risk when the support entries tower over the noise,
    otherwise from a Monte-Carlo search seeded at
    ``eta*sqrt(2 log(n/s))``.  The residual radius is always searched,
    seeded at ``eta*sqrt(n)``.
    """
    if program_kind == "ls":
        if inst.s < 1 or not np.any(inst.x0):
            raise DegenerateInputError("the l1 radius degenerates to 0 for an empty signal")
        return float(np.abs(inst.x0).sum())
    if program_kind == "qp":
        if inst.s < 1:
            raise DegenerateInputError("s >= 1 is required to tune the threshold")
        support_min = float(np.abs(inst.x0[inst.x0 != 0]).min())
        if support_min >= 100.0 * inst.eta * lambda_bar(max(inst.n, 2)):
            return inst.eta * lambda_star(inst.s, inst.n)
        seed_value = inst.eta * math.sqrt(2.0 * math.log(inst.n / inst.s))
        return _mc_param_search("qp", inst, seed_value, k_search, rel_tol)
    if program_kind == "bp":
        return _mc_param_search("bp", inst, inst.eta * math.sqrt(inst.n), k_search, rel_tol)
    raise InvalidParameterError(f"unknown program kind {program_kind!r}")


def best_loss_vs_N(n_grid, s, eta, k, n_sigma, seed, c_low=0.5, c_high=5.0, entry_scale=None,
                   workers=None, max_attempts=10_000_000):
    """Per-realization best residual-program loss, swept over dimensions.

    For each ``N`` draws ``k`` noise vectors conditioned on the energy band
    ``(c_low, c_high)``, evaluates the loss on an ``n_sigma``-point
    log-spaced radius grid spanning ``[0.2, 2] * eta * sqrt(N)``, keeps each
    realization's minimum, and reports ``(N, mean, std)`` rows.
    """
    eta = check_positive(eta, "eta")
    s = int(s)
    k = int(k)
    n_sigma = int(n_sigma)
    if k < 1 or n_sigma < 1:
        raise InvalidParameterError("k and n_sigma must be >= 1")
    if s < 0 or any(int(n) < max(s, 2) for n in n_grid):
        raise InvalidParameterError("every grid dimension must be >= max(s, 2)")

    def eval_dim(args):
        i, n = args
        n = int(n)
        scale = float(n) if entry_scale is None else float(entry_scale)
        x0 = np.zeros(n)
        x0[:s] = scale
        pivot = eta * math.sqrt(n)
        sigmas = np.geomspace(0.2 * pivot, 2.0 * pivot, n_sigma)
        spec = geometry.EventSpec(geometry.EVENT_ENERGY_BAND, c_low, c_high, n)
        best = np.empty(k)
        for j in range(k):
            z = geometry.sample_event(
                spec, _event_seed(seed, _LANE_EVENT, i, j), max_attempts=max_attempts
            )
            y = x0 + eta * z
            a, presq = _sorted_squares(y)
            ynorm = math.sqrt(presq[-1])
            losses = np.empty(n_sigma)
            for q, sig in enumerate(sigmas):
                if ynorm <= sig:
                    xhat = np.zeros_like(y)
                else:
                    xhat = soft_threshold(y, _residual_threshold(a, presq, sig))
                d = xhat - x0
                losses[q] = float(d @ d) / (eta * eta)
            best[j] = losses.min()
        std = float(best.std(ddof=1)) if k > 1 else 0.0
        return int(n), float(best.mean()), std

    jobs = list(enumerate(n_grid))
    if workers is not None and workers > 1:
        with ThreadPoolExecutor(max_workers=int(workers)) as pool:
            rows = list(pool.map(eval_dim, jobs))
    else:
        rows = [eval_dim(job) for job in jobs]
    return rows
