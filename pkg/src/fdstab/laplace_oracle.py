"""Impulse responses by numerical Laplace inversion, used as a stability cross-check.

The inversion is the Valsa-Brancik scheme: with ``s_n = (a + i n pi) / t``,

    f(t) ~ e^a / t * sum_n w_n (-1)^n Re F(s_n),   n = 0 .. ns + nd

where ``w_0 = 1/2``, ``w_n = 1`` up to ``ns`` and the last ``nd`` weights
apply Euler (binomial) smoothing to the alternating tail.

The series resolves frequencies up to about ``(ns + nd) * pi / t``. Faster
oscillations, and growth faster than ``a / t``, are silently lost, so long
horizons need a longer series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .calculus import evaluate
from .errors import FdstabError, TooFewSamples
from .expr import CharFn

__all__ = [
    "InversionOptions",
    "ImpulseTrace",
    "Decay",
    "invert_laplace",
    "impulse_response",
    "decay_check",
]


@dataclass(frozen=True)
class InversionOptions:
    shift: float = 6.0
    series_len: int = 20
    euler_depth: int = 19

    def __post_init__(self):
        if self.shift <= 0:
            raise ValueError("shift must be positive")
        if self.series_len < 1 or self.euler_depth < 1:
            raise ValueError("series_len and euler_depth must be >= 1")


@dataclass(frozen=True)
class ImpulseTrace:
    times: np.ndarray
    values: np.ndarray  # NaN marks a sample whose inversion failed

    @property
    def valid(self) -> np.ndarray:
        return np.isfinite(self.values)


class Decay(str, Enum):
    DECAYING = "Decaying"
    GROWING = "Growing"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self):
        return self.value


def _weights(ns: int, nd: int) -> np.ndarray:
    w = np.ones(ns + nd + 1)
    w[0] = 0.5
    # w[ns + k] = sum_{j <= nd - k} C(nd, j) / 2^nd
    tail = np.cumsum([math.comb(nd, j) for j in range(nd + 1)])[::-1] / 2.0**nd
    w[ns + 1:] = tail[1:]
    signs = np.where(np.arange(ns + nd + 1) % 2 == 0, 1.0, -1.0)
    return w * signs


def invert_laplace(F, t: float, opts: InversionOptions | None = None) -> float:
    """Value at time ``t > 0`` of the inverse transform of ``F``.

    ``F`` is called once with the complex array of abscissae.
    """
    opts = opts or InversionOptions()
    if not t > 0:
        raise ValueError("t must be positive")
    n = np.arange(opts.series_len + opts.euler_depth + 1)
    s = (opts.shift + 1j * math.pi * n) / t
    fs = np.asarray(F(s), dtype=complex)
    return float(math.exp(opts.shift) / t * np.dot(_weights(opts.series_len, opts.euler_depth), fs.real))


def impulse_response(
    cf: CharFn, t_max: float, n_points: int, opts: InversionOptions | None = None
) -> ImpulseTrace:
    """Samples of the inverse transform of 1/Delta(s) at t_max/n, 2 t_max/n, ..., t_max."""
    if not t_max > 0:
        raise ValueError("t_max must be positive")
    if n_points < 2:
        raise ValueError("n_points must be at least 2")
    opts = opts or InversionOptions()
    times = t_max * np.arange(1, n_points + 1) / n_points
    values = np.empty(n_points)
    for k, t in enumerate(times):
        try:
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                values[k] = invert_laplace(lambda s: 1.0 / evaluate(cf, s), t, opts)
        except (FdstabError, ZeroDivisionError, FloatingPointError, OverflowError):
            values[k] = np.nan
    values[~np.isfinite(values)] = np.nan
    return ImpulseTrace(times, values)


def _rms(x):
    return math.sqrt(float(np.mean(np.square(x))))


def decay_check(trace: ImpulseTrace) -> Decay:
    """Compare RMS over the last quarter of the trace with the second quarter."""
    v = trace.values[trace.valid]
    if v.size < 16:
        raise TooFewSamples(f"need at least 16 valid samples, got {v.size}")
    q = v.size // 4
    early = _rms(v[q:2 * q])
    late = _rms(v[v.size - q:])
    if early == 0:
        return Decay.INCONCLUSIVE if late == 0 else Decay.GROWING
    ratio = late / early
    if ratio < 0.5:
        return Decay.DECAYING
    if ratio > 2:
        return Decay.GROWING
    return Decay.INCONCLUSIVE
