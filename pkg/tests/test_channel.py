import math

import numpy as np
import pytest

from d2drelay.channel import (
    ChannelProcess,
    DopplerSpec,
    doppler_correlation,
    init_channel,
    step_channel,
)
from d2drelay.numerics import RandomStream, sample_complex_gaussian

from oracles import bisect, j0_series


def trajectory(a, variance, steps, seed=0, stream=0):
    rng = RandomStream(seed, stream)
    ch = init_channel(a, variance, rng)
    out = np.empty(steps, dtype=complex)
    for i in range(steps):
        ch = step_channel(ch, rng)
        out[i] = ch.current
    return out, ch


# -- doppler_correlation ---------------------------------------------------------


def test_static_channel():
    assert doppler_correlation(DopplerSpec(doppler_hz=0.0, symbol_period_s=1e-3)) == 1.0


def test_first_zero_of_correlation():
    root = bisect(j0_series, 2.0, 3.0, tol=1e-14)
    T = 1e-3
    spec = DopplerSpec(doppler_hz=root / (2 * math.pi * T), symbol_period_s=T)
    assert abs(doppler_correlation(spec)) < 1e-9


@pytest.mark.parametrize("target", [0.998, 0.899, 0.799])
def test_back_solved_variation_rates(target):
    x = bisect(lambda v: j0_series(v) - target, 0.0, 2.4, tol=1e-14)
    if target == 0.998:
        assert x == pytest.approx(0.0895, abs=5e-4)
    T = 0.5e-3
    spec = DopplerSpec(doppler_hz=x / (2 * math.pi * T), symbol_period_s=T)
    assert doppler_correlation(spec) == pytest.approx(target, abs=1e-4)


def test_correlation_can_go_negative():
    spec = DopplerSpec(doppler_hz=3.5 / (2 * math.pi * 1e-3), symbol_period_s=1e-3)
    assert doppler_correlation(spec) < 0


@pytest.mark.parametrize(
    "fd, T", [(-1.0, 1e-3), (10.0, 0.0), (math.nan, 1e-3), (10.0, math.inf)]
)
def test_invalid_doppler_spec(fd, T):
    with pytest.raises(ValueError):
        DopplerSpec(doppler_hz=fd, symbol_period_s=T)


# -- init_channel / step_channel -------------------------------------------------


def test_zero_variance_init():
    ch = init_channel(1.0, 0.0, RandomStream(1))
    assert ch.current == 0j and ch.estimate == 0j and ch.step_count == 0


def test_init_current_equals_estimate():
    ch = init_channel(0.998, 1.0, RandomStream(1, 5))
    assert ch.current == ch.estimate


@pytest.mark.parametrize("a, var", [(1.5, 1.0), (-1.01, 1.0), (0.5, -1.0), (math.nan, 1.0)])
def test_init_rejects_bad_parameters(a, var):
    with pytest.raises(ValueError):
        init_channel(a, var, RandomStream(0))


def test_init_power():
    powers = [abs(init_channel(0.9, 1.0, RandomStream(77, i)).current) ** 2 for i in range(100_000)]
    # std of the mean of Exp(1) over 1e5 draws is 0.0032
    assert np.mean(powers) == pytest.approx(1.0, abs=0.03)


def test_static_channel_is_frozen():
    rng = RandomStream(3)
    ch0 = init_channel(1.0, 1.0, rng)
    ch = ch0
    for _ in range(500):
        ch = step_channel(ch, rng)
        assert ch.current == ch0.current
    assert ch.step_count == 500


def test_memoryless_channel_is_pure_innovation():
    rng = RandomStream(4)
    ch = init_channel(0.0, 2.0, rng)
    probe = RandomStream(4)
    probe.position = rng.position
    expected = sample_complex_gaussian(probe, 0j, 2.0)
    assert step_channel(ch, rng).current == expected


def test_estimate_never_changes():
    rng = RandomStream(8)
    ch = init_channel(0.7, 1.0, rng)
    h0 = ch.estimate
    for _ in range(1000):
        ch = step_channel(ch, rng)
        assert ch.estimate == h0
    assert ch.current != h0


def test_step_returns_new_state():
    rng = RandomStream(8)
    ch = init_channel(0.7, 1.0, rng)
    nxt = step_channel(ch, rng)
    assert ch.step_count == 0 and nxt.step_count == 1


def test_process_validation():
    with pytest.raises(ValueError):
        ChannelProcess(a=0.5, variance=1.0, current=complex(math.nan, 0), estimate=0j)


@pytest.mark.slow
def test_lag1_correlation_long_trajectory():
    xs, _ = trajectory(0.9, 1.0, 1_000_000, seed=12)
    rho = np.real(np.vdot(xs[:-1], xs[1:])) / np.vdot(xs, xs).real
    assert rho == pytest.approx(0.9, abs=0.02)


@pytest.mark.parametrize("k", [1, 2, 5])
def test_lag_k_autocovariance(k):
    a, var = 0.8, 1.5
    xs = np.concatenate([trajectory(a, var, 20_000, seed=5, stream=s)[0] for s in range(10)])
    blocks = xs.reshape(10, -1)
    cov = np.mean([np.real(np.vdot(b[:-k], b[k:])) / (b.size - k) for b in blocks])
    # per-block std of the lag-k estimate is ~ var/sqrt(n) * sqrt((1+a^2)/(1-a^2))
    sigma = var / math.sqrt(blocks.size) * math.sqrt((1 + a * a) / (1 - a * a))
    assert abs(cov - a**k * var) < 3 * sigma


def test_stationarity_over_many_trajectories():
    a, var, n = 0.6, 2.0, 100_000
    powers = np.empty(n)
    for i in range(n):
        rng = RandomStream(31, i)
        powers[i] = abs(step_channel(init_channel(a, var, rng), rng).current) ** 2
    # |h|^2 ~ Exp(mean var): std of the mean is var / sqrt(n)
    assert abs(powers.mean() - var) < 3 * var / math.sqrt(n)
