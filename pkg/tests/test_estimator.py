import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bcrank.estimator import (
    EstimatorConfig,
    HypothesisTally,
    allocate_deltas,
    bernstein_epsilon,
    doubling_rounds,
    estimate_risks,
    sample_budget,
    sample_sizes,
    tally_variance,
)


def test_bernstein_value():
    mp = mpmath.mpf
    L = mpmath.log(mp(2) / mp("0.1"))
    want = mpmath.sqrt(2 * mp("0.25") * L / 100) + 7 * L / (3 * mp(100))
    assert float(want) == pytest.approx(0.1922878, abs=1e-7)
    assert bernstein_epsilon(100, 0.1, 0.25) == pytest.approx(float(want), abs=1e-12)
    assert bernstein_epsilon(250, 0.1, 0.0) == 7 * math.log(20) / 750


@pytest.mark.xfail(strict=True, reason="0.192293 is not the value of the radius formula (0.1922878)")
def test_bernstein_published_constant():
    assert bernstein_epsilon(100, 0.1, 0.25) == pytest.approx(0.192293, abs=1e-6)


@given(st.integers(2, 10**7), st.integers(1, 10**6), st.floats(1e-9, 0.999), st.floats(0, 0.25))
def test_bernstein_decreasing_in_n(n, extra, delta0, var):
    assert bernstein_epsilon(n + extra, delta0, var) < bernstein_epsilon(n, delta0, var)


@given(st.integers(2, 10**6), st.floats(1e-9, 0.5), st.floats(0, 0.25), st.floats(0, 0.25))
def test_bernstein_increasing_in_variance(n, delta0, v1, v2):
    lo, hi = sorted((v1, v2))
    assert bernstein_epsilon(n, delta0, lo) <= bernstein_epsilon(n, delta0, hi)


def test_bernstein_vectorised_and_domain():
    out = bernstein_epsilon(100, np.array([0.1, 0.01]), np.array([0.25, 0.0]))
    assert out.shape == (2,) and out[0] == pytest.approx(bernstein_epsilon(100, 0.1, 0.25))
    for args in ((1, 0.1, 0.1), (10, 0.0, 0.1), (10, 1.0, 0.1), (10, 0.5, -1.0)):
        with pytest.raises(ValueError):
            bernstein_epsilon(*args)


def test_budget_arithmetic():
    n0, nmax = sample_sizes(0.1, 0.01, 3, 0.5)
    assert nmax == 381
    assert n0 == math.ceil(50 * math.log(100))
    assert doubling_rounds(n0, nmax) == 1


@given(st.floats(0.01, 0.5), st.floats(0.05, 1.0), st.floats(1e-6, 0.5), st.integers(1, 20))
def test_budget_scales_with_inverse_square_of_lambda(eps, lam, delta, vc):
    # running at eps / lam needs lam**2 of the samples needed at eps
    b0, bmax = sample_budget(eps, delta, vc)
    s0, smax = sample_budget(eps / lam, delta, vc)
    assert s0 == pytest.approx(lam * lam * b0, rel=1e-12)
    assert smax == pytest.approx(lam * lam * bmax, rel=1e-12)


def test_allocate_deltas():
    d = allocate_deltas([0.25, 0.01], 0.1, 0.01, 3, n0=200)
    assert 2 * d.sum() == pytest.approx(0.01 / 3, rel=1e-12)
    # the noisier hypothesis needs, and gets, the larger failure budget
    assert d[0] > d[1]
    u = allocate_deltas([0.0, 0.0, 0.0], 0.1, 0.01, 2, n0=200)
    assert np.allclose(u, 0.01 / 12)
    assert allocate_deltas([0.2], 0.1, 0.01, 1, n0=200)[0] == pytest.approx(0.005)
    with pytest.raises(ValueError):
        allocate_deltas([], 0.1, 0.01, 1)
    with pytest.raises(ValueError):
        allocate_deltas([0.1], 0.1, 0.01, 0)


@given(st.lists(st.floats(0, 0.25), min_size=1, max_size=30), st.floats(0.01, 0.5), st.floats(1e-4, 0.5), st.integers(1, 10))
@settings(max_examples=100)
def test_allocation_respects_union_budget(varis, eps, delta, rounds):
    d = allocate_deltas(varis, eps, delta, rounds, n0=100)
    assert np.all(d > 0)
    assert 2 * d.sum() <= delta / rounds * (1 + 1e-9)


@given(st.lists(st.integers(0, 1), min_size=2, max_size=200))
def test_tally_variance_is_sample_variance(zs):
    t = HypothesisTally()
    for z in zs:
        t.add(z)
    assert t.variance == pytest.approx(np.var(zs, ddof=1), abs=1e-12)
    assert tally_variance(len(zs), sum(zs), sum(zs)) == pytest.approx(t.variance)


def test_config_validation():
    for kw in ({"epsilon": 0}, {"epsilon": 1.0}, {"delta": 1.0}, {"c": 0}, {"vc_bound": 0}, {"max_workers": 0}):
        with pytest.raises(ValueError):
            EstimatorConfig(**kw)


def bernoulli_problem(p):
    """Hypothesis j fires independently with probability p[j]."""
    p = np.asarray(p)

    def gen(rng):
        return rng.random(len(p)) < p

    def losses(x):
        return np.flatnonzero(x).tolist()

    return gen, losses


def test_exact_only_when_lambda_vanishes():
    gen, losses = bernoulli_problem([0.5])
    br = estimate_risks(lambda: (1.0, [0.7]), gen, losses, 1, EstimatorConfig())
    assert br.halted_by == "exact" and br.samples_used == 0 and br.ell.tolist() == [0.7]


def test_combined_risk_and_rounds():
    p = [0.3, 0.05, 0.0]
    gen, losses = bernoulli_problem(p)
    cfg = EstimatorConfig(epsilon=0.02, delta=0.05, vc_bound=2, seed=1)
    br = estimate_risks(lambda: (0.2, [0.1, 0.0, 0.0]), gen, losses, 3, cfg)
    assert br.lam == pytest.approx(0.8)
    assert br.eps_prime == pytest.approx(0.025)
    assert np.allclose(br.ell, br.hat_ell + 0.8 * br.tilde_ell)
    assert br.n0 <= br.samples_used <= br.n_max
    assert br.rounds <= math.ceil(math.log2(br.n_max / br.n0)) + 1
    assert np.all(np.abs(br.tilde_ell - p) < br.eps_prime)
    assert br.tilde_ell[2] == 0.0
    if br.halted_by == "stopping-rule":
        assert br.radii.max() <= br.eps_prime
    else:
        assert br.samples_used == br.n_max


def test_low_variance_stops_before_budget():
    gen, losses = bernoulli_problem([0.001])
    cfg = EstimatorConfig(epsilon=0.05, delta=0.01, vc_bound=20, seed=0)
    br = estimate_risks(lambda: (0.0, [0.0]), gen, losses, 1, cfg)
    assert br.halted_by == "stopping-rule" and br.samples_used < br.n_max


def test_max_samples_override():
    gen, losses = bernoulli_problem([0.5, 0.5])
    cfg = EstimatorConfig(epsilon=0.01, delta=0.01, seed=0, max_samples=300)
    br = estimate_risks(lambda: (0.0, [0.0, 0.0]), gen, losses, 2, cfg)
    assert br.samples_used == 300 and br.halted_by == "sample-cap"


@pytest.mark.parametrize("workers", [1, 3])
def test_deterministic_for_fixed_seed_and_workers(workers):
    gen, losses = bernoulli_problem([0.2, 0.4])
    cfg = EstimatorConfig(epsilon=0.05, delta=0.05, seed=11, max_workers=workers)
    a = estimate_risks(lambda: (0.0, [0.0, 0.0]), gen, losses, 2, cfg)
    b = estimate_risks(lambda: (0.0, [0.0, 0.0]), gen, losses, 2, cfg)
    assert a.samples_used == b.samples_used and np.array_equal(a.tilde_ell, b.tilde_ell)


def test_coverage():
    p = np.linspace(0.0, 0.5, 8)
    gen, losses = bernoulli_problem(p)
    eps, delta = 0.05, 0.2
    failures = 0
    for seed in range(60):
        cfg = EstimatorConfig(epsilon=eps, delta=delta, vc_bound=3, seed=seed)
        br = estimate_risks(lambda: (0.0, np.zeros(len(p))), gen, losses, len(p), cfg)
        failures += np.max(np.abs(br.ell - p)) >= eps
    assert failures <= 60 * delta / 2


def test_wrong_exact_shape():
    gen, losses = bernoulli_problem([0.5])
    with pytest.raises(ValueError):
        estimate_risks(lambda: (0.0, [0.0, 0.0]), gen, losses, 1, EstimatorConfig())
    with pytest.raises(ValueError):
        estimate_risks(lambda: (0.0, []), gen, losses, 0, EstimatorConfig())
