"""Gaussian mean width of capped l1 balls, bound evaluators, event samplers.

The central object is ``K = l1_radius * B1 ∩ l2_radius * B2`` in dimension
``dim``; its Gaussian mean width ``E sup_{x in K} <x, g>`` measures the
effective dimension seen by the constrained denoisers.  The inner sup has a
closed form built from soft thresholding, so the Monte-Carlo width estimate
only averages exact maximizations.
"""

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InvalidParameterError, SamplingFailureError
from .validation import as_vector, check_positive

__all__ = [
    "GmwSetSpec",
    "EventSpec",
    "InstabilityConstants",
    "N0Estimate",
    "EVENT_ENERGY_BAND",
    "EVENT_LOW_ENERGY",
    "sup_linear_l1l2",
    "gmw_estimate",
    "bellec_upper",
    "bellec_lower",
    "sample_event",
    "n0_estimate",
]

#: Noise energy in a band: c_low * sqrt(2N) <= ||z||^2 - N <= c_high * sqrt(2N).
EVENT_ENERGY_BAND = "energy_band"
#: Below-average energy with a bounded largest entry:
#: ||z||^2 <= N - 2*sqrt(N) and ||z||_inf <= sqrt(3 log N).
EVENT_LOW_ENERGY = "low_energy"


@dataclass(frozen=True)
class GmwSetSpec:
    """An l1 ball of radius ``l1_radius`` capped by an l2 ball of radius ``l2_radius``."""

    l1_radius: float
    l2_radius: float
    dim: int

    def __post_init__(self):
        object.__setattr__(self, "l1_radius", check_positive(self.l1_radius, "l1_radius"))
        object.__setattr__(self, "l2_radius", check_positive(self.l2_radius, "l2_radius"))
        if int(self.dim) < 1:
            raise InvalidParameterError("dim must be a positive integer")
        object.__setattr__(self, "dim", int(self.dim))


@dataclass(frozen=True)
class EventSpec:
    """A conditioning event for standard normal vectors."""

    kind: str
    c_low: float
    c_high: float
    dim: int

    def __post_init__(self):
        if self.kind not in (EVENT_ENERGY_BAND, EVENT_LOW_ENERGY):
            raise InvalidParameterError(f"unknown event kind {self.kind!r}")
        if int(self.dim) < 2:
            raise InvalidParameterError("dim must be an integer >= 2")
        object.__setattr__(self, "dim", int(self.dim))
        if self.kind == EVENT_ENERGY_BAND and not self.c_low < self.c_high:
            raise InvalidParameterError("energy band requires c_low < c_high")


@dataclass(frozen=True)
class InstabilityConstants:
    """Constants (a1, c1, c2, big_l) parametrizing the overconstrained-failure bounds."""

    a1: float
    c1: float
    c2: float
    big_l: float

    def __post_init__(self):
        for name in ("a1", "c1", "c2", "big_l"):
            object.__setattr__(self, name, check_positive(getattr(self, name), name))
        if self.big_l < 1.0:
            raise InvalidParameterError("big_l must be >= 1")


class N0Estimate(NamedTuple):
    n0_2a: float
    d1: float
    d2: float
    d5: float


def _sup_value(g, lam, alpha):
    # Exact max of <x, g> over the capped ball; returns (value, maximizer).
    n = g.size
    if not np.any(g):
        return 0.0, np.zeros(n)
    a = np.abs(g)
    ginf = a.max()
    gn1 = a.sum()
    gn2 = float(np.linalg.norm(g))
    ties = a >= ginf * (1.0 - 1e-14)
    n_ties = int(ties.sum())
    if lam <= alpha * math.sqrt(n_ties):
        # l1 constraint binds alone: spread the budget over the largest entries.
        x = np.zeros(n)
        x[ties] = np.sign(g[ties]) * (lam / n_ties)
        return lam * ginf, x
    if gn1 * alpha <= lam * gn2:
        # l2 constraint binds alone.
        x = (alpha / gn2) * g
        return alpha * gn2, x
    # Both constraints bind: the maximizer is a normalized soft threshold of g
    # with t chosen so the l1/l2 ratio matches lam/alpha.  The ratio map
    #   r(t) = ||S_t(g)||_1 / ||S_t(g)||_2
    # decreases from ||g||_1/||g||_2 at t=0 to sqrt(#top ties) near max|g|.
    target = lam / alpha
    srt = np.sort(a)[::-1]

    def ratio(t):
        # Shrunken-magnitude l1/l2 ratio, computed on the surviving slice so
        # that near-max thresholds do not cancel catastrophically.
        m = int(np.searchsorted(-srt, -t, side="left"))  # entries strictly above t
        top = srt[:m] - t
        return top.sum() / math.sqrt(float(top @ top))

    lo, hi = 0.0, ginf * (1.0 - 1e-13)
    r_lo, r_hi = ratio(lo), ratio(hi)
    if not (r_lo >= target >= r_hi):
        raise InvalidParameterError(
            f"ratio bracket [{r_hi:.3g}, {r_lo:.3g}] does not straddle {target:.3g}"
        )
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if ratio(mid) > target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * ginf:
            break
    t = 0.5 * (lo + hi)
    shr = np.sign(g) * np.maximum(a - t, 0.0)
    x = (alpha / np.linalg.norm(shr)) * shr
    return float(x @ g), x


def sup_linear_l1l2(g, spec):
    """Maximize ``<x, g>`` over the capped l1 ball described by ``spec``.

    Returns ``(value, maximizer)``; the maximizer is feasible to 1e-10 in
    both norms and the value is exact up to the scalar bisection tolerance.
    """
    g = as_vector(g, "g")
    if g.size != spec.dim:
        raise InvalidParameterError(f"g has length {g.size}, spec.dim is {spec.dim}")
    return _sup_value(g, spec.l1_radius, spec.l2_radius)


def gmw_estimate(spec, samples, seed):
    """Monte-Carlo Gaussian mean width of the capped ball.

    Averages the exact per-sample sup over ``samples`` iid standard normal
    directions; returns ``(mean, stderr)`` with the usual sample standard
    error.  Deterministic given ``seed``.
    """
    samples = int(samples)
    if samples < 2:
        raise InvalidParameterError("samples must be >= 2")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    draws = rng.standard_normal((samples, spec.dim))
    sups = np.empty(samples)
    for i in range(samples):
        sups[i], _ = _sup_value(draws[i], spec.l1_radius, spec.l2_radius)
    return float(sups.mean()), float(sups.std(ddof=1) / math.sqrt(samples))


def bellec_upper(n, gamma, m):
    """Upper width bound for a 2N-point convex hull capped at radius ``gamma``.

    Evaluates ``min(4*sqrt(max(1, log(8*e*N*gamma^2))), gamma*sqrt(min(m, 2N)))``.
    """
    n = int(n)
    m = int(m)
    if n < 2 or m < 1:
        raise InvalidParameterError("need N >= 2 and m >= 1")
    gamma = check_positive(gamma, "gamma")
    if gamma > 1.0:
        raise InvalidParameterError("gamma must lie in (0, 1]")
    local = 4.0 * math.sqrt(max(1.0, math.log(8.0 * math.e * n * gamma * gamma)))
    ball = gamma * math.sqrt(min(m, 2 * n))
    return min(local, ball)


def bellec_lower(n, gamma, kappa):
    """Matching lower width bound ``(sqrt(2)/4) * kappa * sqrt(log(N*gamma^2/5))``.

    Only meaningful when ``N*gamma^2 >= 5`` (effective sparsity at most N/5);
    smaller products make the logarithm negative and are rejected.
    """
    n = int(n)
    if n < 2:
        raise InvalidParameterError("need N >= 2")
    gamma = check_positive(gamma, "gamma")
    kappa = check_positive(kappa, "kappa")
    arg = n * gamma * gamma / 5.0
    logval = math.log(arg)
    if logval < 0.0:
        raise InvalidParameterError(
            f"N*gamma^2 = {n * gamma * gamma:.3g} < 5: the lower bound does not apply"
        )
    return (math.sqrt(2.0) / 4.0) * kappa * math.sqrt(logval)


def _event_holds(spec, z):
    if spec.kind == EVENT_ENERGY_BAND:
        dev = float(z @ z) - spec.dim
        half_width = math.sqrt(2.0 * spec.dim)
        return spec.c_low * half_width <= dev <= spec.c_high * half_width
    energy_ok = float(z @ z) <= spec.dim - 2.0 * math.sqrt(spec.dim)
    return energy_ok and float(np.abs(z).max()) <= math.sqrt(3.0 * math.log(spec.dim))


def sample_event(spec, seed, max_attempts=10_000_000):
    """Rejection-sample a standard normal vector conditioned on ``spec``.

    Deterministic given ``seed`` (an int or a ``numpy.random.SeedSequence``).
    Gives up with ``SamplingFailureError`` once ``max_attempts`` consecutive
    draws are rejected, which flags events of probability below ~1e-6.
    """
    if isinstance(seed, np.random.SeedSequence):
        rng = np.random.default_rng(seed)
    else:
        rng = np.random.default_rng(np.random.SeedSequence(seed))
    for _ in range(int(max_attempts)):
        z = rng.standard_normal(spec.dim)
        if _event_holds(spec, z):
            return z
    raise SamplingFailureError(
        f"no accepted draw in {max_attempts} attempts for event {spec.kind!r} (dim={spec.dim})"
    )


def n0_estimate(tc):
    """Dimension threshold implied by the overconstrained-failure constants.

    Returns ``(n0_2a, d1, d2, d5)`` with ``d1 = a1^2/(5 L^2)``,
    ``d2 = 2*((c1 + a1^2)/L^2)^2``, ``d5 = c2^2/(32 L^2)`` and
    ``n0_2a = exp(1/(2 d5))``.  The bound machinery needs ``d1 < 1`` and
    ``d2 < 1/2``; violations are reported as warnings, not errors, since
    published constant choices sit very close to the d2 boundary.
    """
    l2 = tc.big_l * tc.big_l
    d1 = tc.a1 * tc.a1 / (5.0 * l2)
    d2 = 2.0 * ((tc.c1 + tc.a1 * tc.a1) / l2) ** 2
    d5 = tc.c2 * tc.c2 / (32.0 * l2)
    if d1 >= 1.0:
        warnings.warn(f"d1 = {d1:.4g} >= 1: outside the bound's validity range", stacklevel=2)
    if d2 >= 0.5:
        warnings.warn(f"d2 = {d2:.4g} >= 1/2: outside the bound's validity range", stacklevel=2)
    try:
        n0_2a = math.exp(1.0 / (2.0 * d5))
    except OverflowError:
        n0_2a = math.inf
    return N0Estimate(n0_2a=n0_2a, d1=d1, d2=d2, d5=d5)
