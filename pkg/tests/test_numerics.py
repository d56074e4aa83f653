import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import j0 as scipy_j0
from statsmodels.stats.proportion import proportion_confint

from d2drelay.numerics import (
    ConfidenceInterval,
    RandomStream,
    bessel_j0,
    box_muller,
    counter_uniforms,
    sample_complex_gaussian,
    stream_key,
    wilson_interval,
)

from oracles import bisect, j0_partial_sums, j0_series, wilson_textbook

J0_FIRST_ROOT = 2.404825557695773


# -- bessel_j0 ---------------------------------------------------------------


def test_j0_at_zero():
    assert bessel_j0(0.0) == 1.0


def test_j0_at_one_matches_30_term_series():
    expected = j0_series(1.0, terms=30)
    assert abs(expected - 0.765197686558) < 1e-12
    assert bessel_j0(1.0) == pytest.approx(expected, abs=1e-12)


def test_j0_first_root():
    root = bisect(j0_series, 2.0, 3.0, tol=1e-14)
    assert abs(root - J0_FIRST_ROOT) < 1e-12
    assert abs(bessel_j0(J0_FIRST_ROOT)) < 1e-9


@pytest.mark.parametrize("x", np.linspace(-50.0, 50.0, 401))
def test_j0_accuracy_on_wide_range(x):
    assert bessel_j0(x) == pytest.approx(j0_series(x), abs=1e-9)


def test_j0_against_scipy_dense():
    xs = np.linspace(-50.0, 50.0, 20001)
    err = max(abs(bessel_j0(x) - scipy_j0(x)) for x in xs)
    assert err < 1e-9


@pytest.mark.parametrize("x", [0.3, 1.7, 3.9, 6.2, 8.0])
def test_j0_bracketed_by_partial_sums(x):
    # past the largest term the series alternates with shrinking terms
    sums = j0_partial_sums(x, 30)
    value = bessel_j0(x)
    k0 = int(x / 2) + 1
    for k in range(k0, 25):
        lo, hi = sorted((sums[k], sums[k + 1]))
        assert lo - 1e-13 <= value <= hi + 1e-13


@given(st.floats(min_value=0.0, max_value=50.0))
def test_j0_even(x):
    assert bessel_j0(-x) == bessel_j0(x)


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_j0_rejects_non_finite(bad):
    with pytest.raises(ValueError):
        bessel_j0(bad)


# -- random streams ------------------------------------------------------------


def test_stream_is_reproducible():
    a = RandomStream(42, 1, 2)
    b = RandomStream(42, 1, 2)
    assert [a.uniform() for _ in range(600)] == [b.uniform() for _ in range(600)]


def test_streams_differ_by_index_and_seed():
    base = [RandomStream(42, 1, 2).uniform() for _ in range(1)]
    assert base != [RandomStream(42, 2, 1).uniform()]
    assert base != [RandomStream(43, 1, 2).uniform()]


def test_stream_is_random_access():
    keys = stream_key(9, 0, np.arange(5))
    block = counter_uniforms(keys[:, None], np.arange(10)[None, :])
    for t in range(5):
        s = RandomStream(9, 0, t)
        assert [s.uniform() for _ in range(10)] == block[t].tolist()


def test_split_matches_direct_construction():
    parent = RandomStream(5, 3)
    child = parent.split(7)
    assert child.uniform() == RandomStream(5, 3, 7).uniform()


def test_uniforms_are_in_unit_interval_and_uniform():
    u = counter_uniforms(stream_key(1, 0), np.arange(200_000))
    assert u.min() > 0.0 and u.max() <= 1.0
    assert abs(u.mean() - 0.5) < 3 * math.sqrt(1 / 12 / u.size)
    hist, _ = np.histogram(u, bins=20, range=(0, 1))
    expected = u.size / 20
    chi2 = ((hist - expected) ** 2 / expected).sum()
    assert chi2 < 43.8  # 99.9% point of chi2 with 19 dof


# -- complex Gaussian -------------------------------------------------------------


def test_zero_variance_returns_mean():
    rng = RandomStream(0)
    assert sample_complex_gaussian(rng, 1 + 0j, 0.0) == 1 + 0j
    assert rng.position == 2


def test_negative_variance_rejected():
    with pytest.raises(ValueError):
        sample_complex_gaussian(RandomStream(0), 0j, -1.0)


@pytest.fixture(scope="module")
def gaussian_draws():
    rng = RandomStream(2024, 0)
    return np.array([sample_complex_gaussian(rng, 0j, 2.0) for _ in range(100_000)])


def test_gaussian_mean(gaussian_draws):
    # |mean| has std sqrt(2 / n) ~ 0.0045; 0.02 is > 4 sigma
    assert abs(gaussian_draws.mean()) < 0.02


def test_gaussian_power(gaussian_draws):
    # E|z|^2 = 2, |z|^2 ~ Exp(mean 2) so std of the mean is 2/sqrt(n) ~ 0.0063
    assert np.mean(np.abs(gaussian_draws) ** 2) == pytest.approx(2.0, abs=0.05)


def test_gaussian_is_circular(gaussian_draws):
    re, im = gaussian_draws.real, gaussian_draws.imag
    assert abs(np.corrcoef(re, im)[0, 1]) < 0.02
    assert np.var(re) == pytest.approx(1.0, abs=0.03)
    assert np.var(im) == pytest.approx(1.0, abs=0.03)


def test_vector_and_scalar_gaussian_paths_agree():
    keys = stream_key(3, np.arange(50))
    vec = box_muller(counter_uniforms(keys, 0), counter_uniforms(keys, 1), 1.5)
    for i in range(50):
        z = sample_complex_gaussian(RandomStream(3, i), 0j, 1.5)
        assert z == pytest.approx(vec[i], rel=1e-14, abs=1e-15)


# -- Wilson interval ---------------------------------------------------------------


def test_wilson_zero_successes():
    ci = wilson_interval(0, 100, 0.95)
    assert ci.point == 0.0 and ci.lo == 0.0
    assert ci.hi > 0.0


def test_wilson_symmetric_at_half():
    ci = wilson_interval(50, 100, 0.95)
    assert ci.point == 0.5
    assert (ci.hi - 0.5) == pytest.approx(0.5 - ci.lo, abs=1e-15)


def test_wilson_matches_textbook_formula():
    ci = wilson_interval(10, 1000, 0.95)
    lo, hi = wilson_textbook(10, 1000, 1.959963984540054)
    assert ci.lo == pytest.approx(lo, rel=1e-12)
    assert ci.hi == pytest.approx(hi, rel=1e-12)
    sm_lo, sm_hi = proportion_confint(10, 1000, alpha=0.05, method="wilson")
    assert ci.lo == pytest.approx(sm_lo, rel=1e-9)
    assert ci.hi == pytest.approx(sm_hi, rel=1e-9)


@given(
    st.integers(min_value=1, max_value=10_000).flatmap(
        lambda n: st.tuples(st.integers(min_value=0, max_value=n), st.just(n))
    ),
    st.floats(min_value=0.5, max_value=0.999),
)
def test_wilson_interval_is_ordered(kn, confidence):
    k, n = kn
    ci = wilson_interval(k, n, confidence)
    assert 0.0 <= ci.lo <= ci.point <= ci.hi <= 1.0


@pytest.mark.parametrize("p", [0.0, 0.01, 0.3, 0.5, 0.9, 1.0])
def test_wilson_width_shrinks_with_trials(p):
    widths = [wilson_interval(round(p * n), n).width for n in (100, 200, 400, 800, 1600)]
    assert all(b < a for a, b in zip(widths, widths[1:]))


def test_wilson_rejects_bad_input():
    with pytest.raises(ValueError):
        wilson_interval(0, 0)
    with pytest.raises(ValueError):
        wilson_interval(5, 4)
    with pytest.raises(ValueError):
        ConfidenceInterval(point=0.5, lo=0.6, hi=0.7, confidence=0.95)
