"""Gauss-Markov (AR(1)) channel aging with Doppler-derived correlation.

The true gain evolves as

    h(n) = a * h(n-1) + sqrt(1 - a**2) * dh(n),    dh(n) ~ CN(0, variance)

while the receiver keeps using the gain it measured at the start of the
transmission, so the estimate goes stale as the channel moves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .numerics import RandomStream, bessel_j0, sample_complex_gaussian

__all__ = [
    "ChannelProcess",
    "DopplerSpec",
    "doppler_correlation",
    "init_channel",
    "step_channel",
]


def _check_rate(a: float) -> None:
    if not (math.isfinite(a) and abs(a) <= 1.0):
        raise ValueError(f"variation rate must lie in [-1, 1], got {a!r}")


def _check_variance(variance: float) -> None:
    if not (math.isfinite(variance) and variance >= 0.0):
        raise ValueError(f"variance must be finite and >= 0, got {variance!r}")


@dataclass(frozen=True)
class DopplerSpec:
    """Maximum Doppler shift `doppler_hz` (Hz) and slot duration `symbol_period_s` (s)."""

    doppler_hz: float
    symbol_period_s: float

    def __post_init__(self):
        if not (math.isfinite(self.doppler_hz) and self.doppler_hz >= 0.0):
            raise ValueError(f"doppler_hz must be finite and >= 0, got {self.doppler_hz!r}")
        if not (math.isfinite(self.symbol_period_s) and self.symbol_period_s > 0.0):
            raise ValueError(
                f"symbol_period_s must be finite and > 0, got {self.symbol_period_s!r}"
            )

    @property
    def normalized_doppler(self) -> float:
        """Dimensionless product 2*pi*f_D*T."""
        return 2.0 * math.pi * self.doppler_hz * self.symbol_period_s


def doppler_correlation(spec: DopplerSpec) -> float:
    """Slot-to-slot correlation J0(2*pi*f_D*T).

    The value is not clamped: past the first zero of J0 it is negative,
    which the AR(1) recursion still accepts.
    """
    if not isinstance(spec, DopplerSpec):
        raise TypeError(f"expected DopplerSpec, got {type(spec).__name__}")
    return bessel_j0(spec.normalized_doppler)


@dataclass(frozen=True)
class ChannelProcess:
    """State of one aging channel.

    Attributes
    ----------
    a : float
        Variation rate (correlation between consecutive steps), in [-1, 1].
    variance : float
        Stationary variance of the gain.
    current : complex
        True gain at the current step.
    estimate : complex
        Gain known to the receiver; fixed at the initial draw.
    step_count : int
        Number of AR(1) steps taken since initialization.
    """

    a: float
    variance: float
    current: complex
    estimate: complex
    step_count: int = 0

    def __post_init__(self):
        _check_rate(self.a)
        _check_variance(self.variance)
        for name in ("current", "estimate"):
            z = complex(getattr(self, name))
            if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                raise ValueError(f"{name} must be finite, got {z!r}")

    @property
    def estimation_error(self) -> complex:
        return self.current - self.estimate


def init_channel(a: float, variance: float, rng: RandomStream) -> ChannelProcess:
    """Draw h0 ~ CN(0, variance) and start a process with current = estimate = h0."""
    _check_rate(a)
    _check_variance(variance)
    h0 = sample_complex_gaussian(rng, 0j, variance)
    return ChannelProcess(a=a, variance=variance, current=h0, estimate=h0, step_count=0)


def step_channel(process: ChannelProcess, rng: RandomStream) -> ChannelProcess:
    """Advance the true gain by one AR(1) step; the estimate is left as is."""
    a = process.a
    innovation = sample_complex_gaussian(rng, 0j, process.variance)
    if a == 1.0:
        # keep the state bit-identical, not merely equal up to rounding
        current = process.current
    else:
        current = a * process.current + math.sqrt(1.0 - a * a) * innovation
    return replace(process, current=current, step_count=process.step_count + 1)
