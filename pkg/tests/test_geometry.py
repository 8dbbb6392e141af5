import math

import numpy as np
import pytest
from scipy.stats import chi2

from proxlab import (
    EVENT_ENERGY_BAND,
    EVENT_LOW_ENERGY,
    EventSpec,
    GmwSetSpec,
    InstabilityConstants,
    InvalidParameterError,
    SamplingFailureError,
    bellec_lower,
    bellec_upper,
    gmw_estimate,
    n0_estimate,
    sample_event,
    sup_linear_l1l2,
)


# ------------------------------------------------------------- sup_linear

def test_sup_l2_slack():
    value, x = sup_linear_l1l2(np.array([3.0, 1.0]), GmwSetSpec(1.0, 10.0, 2))
    assert value == pytest.approx(3.0)
    np.testing.assert_allclose(x, [1.0, 0.0])


def test_sup_l1_slack():
    value, x = sup_linear_l1l2(np.array([3.0, 4.0]), GmwSetSpec(100.0, 1.0, 2))
    assert value == pytest.approx(5.0)
    np.testing.assert_allclose(x, [0.6, 0.8])


def test_sup_derived_example():
    # l1/l2 ratio of g is 4/sqrt(10) < lam/alpha = sqrt(2), so the l2 cap
    # binds alone and the value is alpha*||g||_2 = sqrt(20).
    g = np.array([3.0, 1.0])
    assert g.sum() / np.linalg.norm(g) < 2.0 / math.sqrt(2.0)
    value, x = sup_linear_l1l2(g, GmwSetSpec(2.0, math.sqrt(2.0), 2))
    assert value == pytest.approx(math.sqrt(20.0), rel=1e-12)


def test_sup_zero_gradient():
    value, x = sup_linear_l1l2(np.zeros(3), GmwSetSpec(1.0, 1.0, 3))
    assert value == 0.0
    np.testing.assert_array_equal(x, np.zeros(3))


def test_sup_tied_maxima():
    # Two tied entries with lam between alpha and alpha*sqrt(2): the l1
    # budget spreads over the tie and the value is lam*max|g|.
    value, x = sup_linear_l1l2(np.array([1.0, 1.0]), GmwSetSpec(1.2, 1.0, 2))
    assert value == pytest.approx(1.2)
    np.testing.assert_allclose(x, [0.6, 0.6])


def test_sup_feasibility_and_oracle():
    cvxpy = pytest.importorskip("cvxpy")
    rng = np.random.default_rng(99)
    for trial in range(1000):
        d = int(rng.integers(1, 4))
        g = rng.standard_normal(d) * rng.uniform(0.5, 3)
        if not np.any(g):
            continue
        lam = rng.uniform(0.2, 3.0)
        alpha = rng.uniform(0.2, 3.0)
        spec = GmwSetSpec(lam, alpha, d)
        value, x = sup_linear_l1l2(g, spec)
        assert np.abs(x).sum() <= lam * (1 + 1e-10)
        assert np.linalg.norm(x) <= alpha * (1 + 1e-10)
        if trial % 10 == 0:  # convex-programming oracle on a subsample
            xv = cvxpy.Variable(d)
            prob = cvxpy.Problem(
                cvxpy.Maximize(g @ xv),
                [cvxpy.norm1(xv) <= lam, cvxpy.norm(xv) <= alpha],
            )
            prob.solve(solver="CLARABEL")
            assert value == pytest.approx(prob.value, rel=1e-4)


# ----------------------------------------------------------- gmw_estimate

def test_gmw_dim1_analytic():
    mean, stderr = gmw_estimate(GmwSetSpec(1.0, 1.0, 1), 4000, seed=0)
    assert abs(mean - math.sqrt(2.0 / math.pi)) <= 3 * stderr


def test_gmw_linf_limit():
    # Huge l2 cap: the width approaches E max|g| ~ sqrt(2 log N).
    mean, stderr = gmw_estimate(GmwSetSpec(1.0, 1e9, 1000), 500, seed=1)
    assert mean == pytest.approx(math.sqrt(2 * math.log(1000)), rel=0.15)


def test_gmw_l2_limit():
    mean, stderr = gmw_estimate(GmwSetSpec(1e9, 1.0, 400), 500, seed=2)
    assert abs(mean - math.sqrt(400)) <= max(3 * stderr, 0.5)


def test_gmw_monotone_in_radii():
    # Same seed reuses the same gaussian panel, so the per-sample sup is
    # pointwise monotone in both radii and the means inherit it exactly.
    lams = [0.5, 1.0, 2.0]
    alphas = [0.2, 0.5, 1.0]
    means = {
        (lam, al): gmw_estimate(GmwSetSpec(lam, al, 200), 300, seed=7)[0]
        for lam in lams
        for al in alphas
    }
    for al in alphas:
        series = [means[(lam, al)] for lam in lams]
        assert all(a <= b + 1e-12 for a, b in zip(series, series[1:]))
    for lam in lams:
        series = [means[(lam, al)] for al in alphas]
        assert all(a <= b + 1e-12 for a, b in zip(series, series[1:]))


def test_gmw_between_bounds_small():
    # One (gamma, N) cell of the bound sandwich; the acceptance suite runs
    # the full grid.
    gamma, n = 0.3, 1000
    mean, stderr = gmw_estimate(GmwSetSpec(1.0, gamma, n), 2000, seed=3)
    assert mean >= bellec_lower(n, gamma, 1.0) - 3 * stderr
    assert mean <= bellec_upper(n, gamma, n) + 3 * stderr


# ---------------------------------------------------------------- bounds

def test_bellec_upper_example():
    assert bellec_upper(10, 1.0, 10) == pytest.approx(math.sqrt(10.0), rel=1e-12)


def test_bellec_lower_boundary_and_example():
    # Boundary N*gamma^2 = 5 gives log(1) = 0; effective sparsity 10 at
    # N = 500 (gamma = 1/sqrt(10)) gives (sqrt(2)/4)*sqrt(log 10).
    assert bellec_lower(500, math.sqrt(5.0 / 500.0), 1.0) == pytest.approx(0.0, abs=1e-7)
    val = bellec_lower(500, 1.0 / math.sqrt(10.0), 1.0)
    assert val == pytest.approx((math.sqrt(2) / 4) * math.sqrt(math.log(10.0)), rel=1e-12)
    assert val == pytest.approx(0.5366, abs=5e-4)


def test_bellec_lower_rejects_small_product():
    with pytest.raises(InvalidParameterError):
        bellec_lower(200, 0.1, 1.0)


# --------------------------------------------------------------- sampling

def test_sample_event_near_certain_band():
    spec = EventSpec(EVENT_ENERGY_BAND, -10.0, 10.0, 50)
    z = sample_event(spec, seed=0)
    assert z.shape == (50,)


def test_sample_event_is_deterministic():
    spec = EventSpec(EVENT_ENERGY_BAND, 0.5, 5.0, 100)
    np.testing.assert_array_equal(sample_event(spec, seed=42), sample_event(spec, seed=42))


def test_sample_event_band_acceptance_rate():
    # Empirical acceptance over 1e5 trials at N = 1e4 against the exact
    # chi-square band probability (the CLT value Phi(5)-Phi(0.5) ~ 0.3085
    # is within ~1.3e-3 of it at this dimension).
    n = 10**4
    lo = n + 0.5 * math.sqrt(2 * n)
    hi = n + 5.0 * math.sqrt(2 * n)
    p_exact = chi2.cdf(hi, n) - chi2.cdf(lo, n)
    assert p_exact == pytest.approx(0.30854, abs=2e-3)

    rng = np.random.default_rng(123)
    trials = 10**5
    hits = 0
    chunk = 2000
    done = 0
    while done < trials:
        b = min(chunk, trials - done)
        sq = (rng.standard_normal((b, n)) ** 2).sum(axis=1)
        hits += int(((sq >= lo) & (sq <= hi)).sum())
        done += b
    rate = hits / trials
    se = math.sqrt(p_exact * (1 - p_exact) / trials)
    assert abs(rate - p_exact) <= 3 * se


def test_sample_event_low_energy_postcondition():
    n = 10**4
    spec = EventSpec(EVENT_LOW_ENERGY, 0.0, 0.0, n)
    for seed in range(3):
        z = sample_event(spec, seed=seed)
        assert z @ z <= n - 2 * math.sqrt(n)
        assert np.abs(z).max() <= math.sqrt(3 * math.log(n))


def test_sample_event_gives_up():
    spec = EventSpec(EVENT_ENERGY_BAND, 12.0, 12.1, 64)
    with pytest.raises(SamplingFailureError):
        sample_event(spec, seed=0, max_attempts=200)


def test_event_spec_validation():
    with pytest.raises(InvalidParameterError):
        EventSpec(EVENT_ENERGY_BAND, 2.0, 1.0, 100)
    with pytest.raises(InvalidParameterError):
        EventSpec("bogus", 0.0, 1.0, 100)


# ---------------------------------------------------------- n0 arithmetic

def test_n0_published_constant_sets():
    est = n0_estimate(InstabilityConstants(1.45, 5.0, 4.0, 3.78))
    assert est.n0_2a == pytest.approx(1.5e6, rel=0.15)
    assert est.d2 < 0.5
    est2 = n0_estimate(InstabilityConstants(1.58, 4.04, 4.0, 3.62))
    assert est2.n0_2a == pytest.approx(4.9e5, rel=0.05)


def test_n0_diverges_with_big_l():
    small = n0_estimate(InstabilityConstants(1.0, 1.0, 4.0, 2.0)).n0_2a
    large = n0_estimate(InstabilityConstants(1.0, 1.0, 4.0, 50.0)).n0_2a
    assert large > small * 1e6


def test_n0_warns_outside_validity():
    with pytest.warns(UserWarning):
        n0_estimate(InstabilityConstants(1.45, 5.0, 4.0, 3.0))  # d2 > 1/2


# ------------------------------------------------- statistical dimension

def test_stat_dim_cross_link_with_mc():
    # The optimally tuned closed-form risk agrees with the Monte-Carlo
    # small-noise projection risk at the exact radius.
    from proxlab import make_instance, mc_risk, stat_dim_l1

    inst = make_instance(20, 10**3, 1e-3, seed=11)
    mean, stderr = mc_risk("ls", float(np.abs(inst.x0).sum()), inst, k=200)
    target = stat_dim_l1(20, 10**3)
    assert abs(mean - target) / target <= 0.10
