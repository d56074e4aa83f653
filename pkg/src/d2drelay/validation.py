"""Quick built-in invariant checks, run by ``sim validate``.

Each check is cheap (well under a second) and returns ``(name, ok, detail)``.
They are a smoke test of an installation and a configuration; the full
statistical checks live in the test suite.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import replace

import numpy as np

from .channel import DopplerSpec, doppler_correlation, init_channel, step_channel
from .montecarlo import Scenario, estimate_outage
from .numerics import RandomStream, bessel_j0, wilson_interval
from .relay_link import LinkParams, LinkRealization, amplification_factor, sinr_bs, sinr_s1
from .selection import hungarian_match


def _j0_oracle(x: float, terms: int = 60) -> float:
    # power series in exact-ish arithmetic via fsum of independently built terms
    return math.fsum(
        (-1) ** k * (x / 2.0) ** (2 * k) / math.factorial(k) ** 2 for k in range(terms)
    )


def check_bessel():
    xs = np.linspace(0.0, 8.0, 81)
    err = max(abs(bessel_j0(x) - _j0_oracle(x)) for x in xs)
    return "bessel_j0 matches series oracle", err <= 1e-9, f"max abs error {err:.2e}"


def check_doppler_static():
    a = doppler_correlation(DopplerSpec(doppler_hz=0.0, symbol_period_s=1e-3))
    return "static channel has unit correlation", a == 1.0, f"a = {a!r}"


def check_ar1_frozen():
    rng = RandomStream(7, 0)
    ch = init_channel(1.0, 1.0, rng)
    start = ch.current
    for _ in range(100):
        ch = step_channel(ch, rng)
    ok = ch.current == start and ch.estimate == start
    return "a = 1 channel never moves", ok, f"after {ch.step_count} steps"


def check_ar1_correlation():
    a, n = 0.9, 20_000
    rng = RandomStream(11, 0)
    ch = init_channel(a, 1.0, rng)
    xs = np.empty(n, dtype=complex)
    for i in range(n):
        ch = step_channel(ch, rng)
        xs[i] = ch.current
    rho = float(np.real(np.vdot(xs[:-1], xs[1:])) / np.vdot(xs, xs).real)
    return "AR(1) lag-1 correlation", abs(rho - a) < 0.05, f"rho = {rho:.4f} (a = {a})"


def check_sinr_no_aging():
    p = LinkParams(a1=1.0)
    real = LinkRealization(h0_sq=1.0, g0_sq=1.0, beta=1.0)
    g1, g2 = sinr_s1(p, real), sinr_bs(p, real)
    return "a1 = 1 gives the no-aging SINRs", g1 == 0.5 and g2 == 0.5, f"gamma = ({g1}, {g2})"


def check_sinr_scaling():
    p = LinkParams(p1=2.0, p2=0.5, p_relay=3.0, sigma_r2=0.7, sigma_1_2=1.3, sigma_2_2=0.4, a1=0.9)
    q = p.scaled(10.0)
    h0_sq, g0_sq = 1.7, 0.6
    real = LinkRealization(h0_sq, g0_sq, float(amplification_factor(p, h0_sq, g0_sq)))
    real_q = LinkRealization(h0_sq, g0_sq, float(amplification_factor(q, h0_sq, g0_sq)))
    d = max(
        abs(sinr_s1(p, real) - sinr_s1(q, real_q)) / sinr_s1(p, real),
        abs(sinr_bs(p, real) - sinr_bs(q, real_q)) / sinr_bs(p, real),
    )
    return "SINRs invariant under common scaling", d < 1e-12, f"rel diff {d:.1e}"


def check_hungarian():
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(30):
        c = rng.integers(0, 10, (4, 4)).astype(float)
        brute = min(sum(c[i, p[i]] for i in range(4)) for p in itertools.permutations(range(4)))
        worst = max(worst, abs(hungarian_match(c).objective_value - brute))
    return "hungarian_match equals brute force", worst == 0.0, f"max gap {worst:g}"


def check_wilson():
    ci = wilson_interval(10, 1000, 0.95)
    return "Wilson interval brackets the estimate", ci.lo <= ci.point <= ci.hi, str(ci)


def check_outage_limits(scenario: Scenario):
    small = replace(scenario, trials=min(scenario.trials, 500))
    snr, a1 = small.snr_grid_db[-1], small.variation_rates[0]
    zero_th = replace(small, link=replace(small.link, r_threshold=0.0))
    silent = replace(small, link=replace(small.link, p1=0.0, p2=0.0, r_threshold=max(small.link.r_threshold, 1.0)))
    p0 = estimate_outage(zero_th, snr, a1).point
    p1 = estimate_outage(silent, snr, a1).point
    return "outage limits (R_th = 0 -> 0, silent nodes -> 1)", p0 == 0.0 and p1 == 1.0, f"{p0}, {p1}"


def check_determinism(scenario: Scenario):
    small = replace(scenario, trials=min(scenario.trials, 2000))
    snr, a1 = small.snr_grid_db[0], small.variation_rates[-1]
    first = estimate_outage(small, snr, a1)
    second = estimate_outage(small, snr, a1)
    return "estimates are reproducible", first == second, f"{first.point}"


def run_invariant_suite(scenario: Scenario = None) -> list:
    scenario = scenario or Scenario()
    checks = [
        check_bessel,
        check_doppler_static,
        check_ar1_frozen,
        check_ar1_correlation,
        check_sinr_no_aging,
        check_sinr_scaling,
        check_hungarian,
        check_wilson,
        lambda: check_outage_limits(scenario),
        lambda: check_determinism(scenario),
    ]
    results = []
    for check in checks:
        try:
            results.append(check())
        except Exception as exc:  # a crashing check is a failing check
            results.append((getattr(check, "__name__", "check"), False, f"{type(exc).__name__}: {exc}"))
    return results
