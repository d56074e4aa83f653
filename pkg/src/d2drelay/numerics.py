"""Numerical primitives: Bessel J0, a counter-based random stream, complex
Gaussian sampling and Wilson score intervals."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

__all__ = [
    "ConfidenceInterval",
    "RandomStream",
    "bessel_j0",
    "box_muller",
    "counter_uniforms",
    "sample_complex_gaussian",
    "stream_key",
    "wilson_interval",
]

# Below this |x| the power series is summed; above it the Hankel expansion.
_SERIES_CUTOFF = 12.0


def _j0_series(x: float) -> float:
    q = -0.25 * x * x
    term = 1.0
    terms = [term]
    k = 1
    while True:
        term *= q / (k * k)
        terms.append(term)
        if abs(term) < 1e-18:
            break
        k += 1
    return math.fsum(terms)


def _j0_hankel(x: float) -> float:
    # P and Q asymptotic series in 1/(8x); stop at the smallest term.
    mu = 0.0  # 4 * nu**2 for nu = 0
    z = 8.0 * x
    p, q = 1.0, 0.0
    term = 1.0
    prev = math.inf
    for k in range(1, 60):
        term *= (mu - (2 * k - 1) ** 2) / (k * z)
        if abs(term) > prev:
            break
        prev = abs(term)
        if k % 2:
            q += term if (k // 2) % 2 == 0 else -term
        else:
            p += term if (k // 2) % 2 == 0 else -term
    chi = x - 0.25 * math.pi
    return math.sqrt(2.0 / (math.pi * x)) * (p * math.cos(chi) - q * math.sin(chi))


def bessel_j0(x: float) -> float:
    """Zeroth-order Bessel function of the first kind.

    Absolute error is below 1e-9 for |x| <= 50 (in practice ~1e-12).

    Raises
    ------
    ValueError
        If `x` is NaN or infinite.
    """
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"bessel_j0 requires a finite argument, got {x!r}")
    x = abs(x)
    if x < _SERIES_CUTOFF:
        return _j0_series(x)
    return _j0_hankel(x)


# ---------------------------------------------------------------------------
# Counter-based random streams
# ---------------------------------------------------------------------------

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1


def _mix64(z: np.ndarray) -> np.ndarray:
    """SplitMix64 finaliser, elementwise on uint64 arrays (wrapping)."""
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def stream_key(master_seed: int, *indices) -> np.ndarray:
    """Hash a master seed and a tuple of stream indices into 64-bit keys.

    Any index may be an integer array; the result broadcasts over them. The
    same (seed, indices) always gives the same key, independent of the order
    in which streams are created.
    """
    with np.errstate(over="ignore"):
        key = _mix64(np.asarray(master_seed & _MASK64, dtype=np.uint64) + _GOLDEN)
        for idx in indices:
            idx = np.asarray(idx).astype(np.uint64)
            key = _mix64(key ^ _mix64(idx + _GOLDEN))
    return key


def counter_uniforms(keys: np.ndarray, counters: np.ndarray) -> np.ndarray:
    """Uniform draws in (0, 1] addressed by (stream key, counter).

    Word `i` of stream `k` is ``mix64(k + (i + 1) * golden)``; the top 53
    bits become the mantissa. Arrays broadcast against each other.
    """
    keys = np.asarray(keys, dtype=np.uint64)
    counters = np.asarray(counters, dtype=np.uint64)
    with np.errstate(over="ignore"):
        words = _mix64(keys + (counters + np.uint64(1)) * _GOLDEN)
    return ((words >> np.uint64(11)).astype(np.float64) + 1.0) * 2.0**-53


def box_muller(u1, u2, variance):
    """Map two uniforms in (0, 1] to a circular complex Gaussian draw.

    |z|^2 = -variance * log(u1) is exponential with mean `variance`, and the
    phase 2*pi*u2 is uniform, so each component has variance `variance / 2`.
    Works elementwise on arrays.
    """
    r = np.sqrt(-variance * np.log(u1))
    theta = 2.0 * np.pi * u2
    return r * np.cos(theta) + 1j * (r * np.sin(theta))


class RandomStream:
    """Seedable, splittable counter-based uniform stream.

    A stream is fully determined by ``(master_seed, *stream_index)``; its
    n-th draw can be computed without generating the first n - 1, which is
    what lets trials run in any order or in parallel with identical results.

    Parameters
    ----------
    master_seed : int
        Experiment-level seed.
    *stream_index : int
        Any number of integer indices identifying the sub-stream.
    """

    _BLOCK = 256

    def __init__(self, master_seed: int, *stream_index: int):
        self.master_seed = int(master_seed)
        self.stream_index = tuple(int(i) for i in stream_index)
        self.key = stream_key(self.master_seed, *self.stream_index)
        self.position = 0
        self._buffer: list[float] = []
        self._buffer_start = 0

    def split(self, *index: int) -> "RandomStream":
        """Child stream that is independent of this one and of other children."""
        return RandomStream(self.master_seed, *self.stream_index, *index)

    def uniform(self) -> float:
        """Next uniform draw in (0, 1]."""
        offset = self.position - self._buffer_start
        if not 0 <= offset < len(self._buffer):
            self._buffer_start = self.position
            counters = np.arange(self.position, self.position + self._BLOCK, dtype=np.uint64)
            self._buffer = counter_uniforms(self.key, counters).tolist()
            offset = 0
        self.position += 1
        return self._buffer[offset]

    def __repr__(self) -> str:
        return (
            f"RandomStream(master_seed={self.master_seed}, "
            f"stream_index={self.stream_index}, position={self.position})"
        )


def sample_complex_gaussian(rng: RandomStream, mean: complex, variance: float) -> complex:
    """Draw ``mean + z`` with z circularly-symmetric, E|z|^2 = `variance`.

    Two uniforms are always consumed, even when `variance` is zero, so the
    stream position does not depend on the variance.
    """
    if not variance >= 0.0:
        raise ValueError(f"variance must be >= 0, got {variance!r}")
    u1 = rng.uniform()
    u2 = rng.uniform()
    if variance == 0.0:
        return complex(mean)
    r = math.sqrt(-variance * math.log(u1))
    theta = 2.0 * math.pi * u2
    return complex(mean) + complex(r * math.cos(theta), r * math.sin(theta))


# ---------------------------------------------------------------------------
# Binomial confidence intervals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConfidenceInterval:
    point: float
    lo: float
    hi: float
    confidence: float

    def __post_init__(self):
        if not (0.0 <= self.lo <= self.point <= self.hi <= 1.0):
            raise ValueError(f"inconsistent interval {self}")
        if not 0.0 < self.confidence < 1.0:
            raise ValueError(f"confidence must lie in (0, 1), got {self.confidence}")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def overlaps(self, other: "ConfidenceInterval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> ConfidenceInterval:
    """Wilson score interval for a binomial proportion.

    Parameters
    ----------
    successes : int
        Number of successes, ``0 <= successes <= trials``.
    trials : int
        Number of Bernoulli trials, at least 1.
    confidence : float
        Two-sided confidence level in (0, 1).
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if not 0 <= successes <= trials:
        raise ValueError(f"successes must lie in [0, {trials}], got {successes}")
    if not 0.0 < confidence < 1.0:
        raise ValueError(f"confidence must lie in (0, 1), got {confidence}")

    n = float(trials)
    p = successes / n
    z = float(norm.ppf(0.5 + confidence / 2.0))
    z2 = z * z
    denom = 1.0 + z2 / n
    center = (p + z2 / (2.0 * n)) / denom
    half = z / denom * math.sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n))
    lo = min(max(center - half, 0.0), p)
    hi = max(min(center + half, 1.0), p)
    return ConfidenceInterval(point=p, lo=lo, hi=hi, confidence=confidence)
