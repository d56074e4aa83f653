"""Two-way amplify-and-forward link: amplification, SINRs, rates and outage.

Node s1 (cell-edge UE) and the BS both transmit to the mobile relay d1 in the
first slot; d1 scales the superposition by `beta` and broadcasts it in the
second slot. Each end cancels its own echo using a stale channel estimate,
and the residual self-interference is what the ``(1 - a1**2)`` terms carry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "LinkParams",
    "LinkRealization",
    "SinrPair",
    "achievable_rate",
    "amplification_factor",
    "outage_indicator",
    "sinr_bs",
    "sinr_pair",
    "sinr_s1",
]

DEFAULT_RATE_THRESHOLD = 5.0  # bits/s/Hz


@dataclass(frozen=True)
class LinkParams:
    """Powers (W), noise variances (W), variation rates and target rate.

    `a1` is the variation rate that enters both SINR expressions; `a2`
    only drives the aging of the relay-BS channel process.
    """

    p1: float = 1.0
    p2: float = 1.0
    p_relay: float = 1.0
    sigma_r2: float = 1.0
    sigma_1_2: float = 1.0
    sigma_2_2: float = 1.0
    a1: float = 1.0
    a2: float = 1.0
    r_threshold: float = DEFAULT_RATE_THRESHOLD

    def __post_init__(self):
        for name in ("p1", "p2", "p_relay"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0.0):
                raise ValueError(f"{name} must be finite and >= 0, got {value!r}")
        for name in ("sigma_r2", "sigma_1_2", "sigma_2_2"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ValueError(f"{name} must be finite and > 0, got {value!r}")
        for name in ("a1", "a2"):
            value = getattr(self, name)
            if not (math.isfinite(value) and abs(value) <= 1.0):
                raise ValueError(f"{name} must lie in [-1, 1], got {value!r}")
        if not (math.isfinite(self.r_threshold) and self.r_threshold >= 0.0):
            raise ValueError(f"r_threshold must be finite and >= 0, got {self.r_threshold!r}")

    def scaled(self, factor: float) -> "LinkParams":
        """Same link with every power and noise variance multiplied by `factor`."""
        return LinkParams(
            p1=self.p1 * factor,
            p2=self.p2 * factor,
            p_relay=self.p_relay * factor,
            sigma_r2=self.sigma_r2 * factor,
            sigma_1_2=self.sigma_1_2 * factor,
            sigma_2_2=self.sigma_2_2 * factor,
            a1=self.a1,
            a2=self.a2,
            r_threshold=self.r_threshold,
        )


@dataclass(frozen=True)
class LinkRealization:
    """Estimated squared gains |h0|^2, |g0|^2 and the relay's factor beta."""

    h0_sq: float
    g0_sq: float
    beta: float

    def __post_init__(self):
        for name in ("h0_sq", "g0_sq", "beta"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0.0):
                raise ValueError(f"{name} must be finite and >= 0, got {value!r}")


@dataclass(frozen=True)
class SinrPair:
    gamma1: float
    gamma2: float


def amplification_factor(params: LinkParams, h0_sq, g0_sq):
    """Relay gain that normalizes its received power to the relay budget.

        beta = sqrt(p_relay / (p1*|h0|^2 + p2*|g0|^2 + sigma_r2))

    Accepts scalars or arrays for the gains.
    """
    return np.sqrt(params.p_relay / (params.p1 * h0_sq + params.p2 * g0_sq + params.sigma_r2))


def _sinr_s1(p: LinkParams, a1, h0_sq, g0_sq, beta):
    s = a1 * a1
    e = 1.0 - s
    b2s = beta * beta * s
    num = b2s * p.p2 * h0_sq * g0_sq
    den = (
        2.0 * b2s * p.p1 * h0_sq * e
        + b2s * h0_sq * p.sigma_r2
        + b2s * p.p2 * g0_sq * e
        + p.sigma_1_2
    )
    return num / den


def _sinr_bs(p: LinkParams, a1, h0_sq, g0_sq, beta):
    s = a1 * a1
    b2 = beta * beta
    num = b2 * s * p.p1 * h0_sq * g0_sq
    den = b2 * s * p.p1 * g0_sq * (1.0 - s) + b2 * p.p1 * g0_sq + p.sigma_2_2
    return num / den


def sinr_s1(params: LinkParams, real: LinkRealization) -> float:
    """SINR at the cell-edge UE s1 after self-interference cancellation.

    numerator   b^2 a^2 P2 |h0|^2 |g0|^2
    denominator 2 b^2 a^2 P1 |h0|^2 (1 - a^2) + b^2 a^2 |h0|^2 sigma_r^2
                + b^2 a^2 P2 |g0|^2 (1 - a^2) + sigma_1^2
    """
    return float(_sinr_s1(params, params.a1, real.h0_sq, real.g0_sq, real.beta))


def sinr_bs(params: LinkParams, real: LinkRealization) -> float:
    """SINR at the base station.

    numerator   b^2 a^2 P1 |h0|^2 |g0|^2
    denominator b^2 a^2 P1 |g0|^2 (1 - a^2) + b^2 P1 |g0|^2 + sigma_2^2

    The ``b^2 P1 |g0|^2`` term bounds this SINR by ``a^2 |h0|^2`` no matter
    how large the transmit powers are.
    """
    return float(_sinr_bs(params, params.a1, real.h0_sq, real.g0_sq, real.beta))


def sinr_pair(params: LinkParams, real: LinkRealization) -> SinrPair:
    return SinrPair(gamma1=sinr_s1(params, real), gamma2=sinr_bs(params, real))


def achievable_rate(gamma):
    """Half-duplex two-slot rate 0.5*log2(1 + gamma) in bits/s/Hz."""
    if np.ndim(gamma) == 0:
        if not gamma >= 0.0:
            raise ValueError(f"SINR must be >= 0, got {gamma!r}")
        return 0.5 * math.log1p(gamma) / math.log(2.0)
    gamma = np.asarray(gamma, dtype=float)
    if np.any(~(gamma >= 0.0)):
        raise ValueError("SINR must be >= 0")
    return 0.5 * np.log1p(gamma) / np.log(2.0)


def outage_indicator(r1, r2, r_threshold):
    """True when the weaker direction misses the target: min(r1, r2) < r_threshold."""
    if np.ndim(r1) or np.ndim(r2):
        return np.minimum(r1, r2) < r_threshold
    return bool(min(r1, r2) < r_threshold)
