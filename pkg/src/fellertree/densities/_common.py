"""Shared helpers for the log-space density code."""
from __future__ import annotations

import math

import numpy as np

from ..errors import DomainError
from ..special import log_gamma

LOG2 = math.log(2.0)
NEG_INF = -math.inf


def out(v):
    v = np.asarray(v, dtype=float)
    return float(v) if v.ndim == 0 else v


def arr(v):
    return np.asarray(v, dtype=float)


def int_arr(k, name="k"):
    k = np.asarray(k)
    kf = k.astype(float)
    if np.any(kf != np.floor(kf)):
        raise DomainError(f"{name} must be an integer, got {k!r}")
    return kf


def positive(v, name):
    v = arr(v)
    if not np.all(v > 0) or not np.all(np.isfinite(v)):
        raise DomainError(f"{name} must be positive and finite, got {v!r}")
    return v


def nonneg(v, name):
    v = arr(v)
    if not np.all(v >= 0) or not np.all(np.isfinite(v)):
        raise DomainError(f"{name} must be nonnegative and finite, got {v!r}")
    return v


def safe(v, mask, fill):
    """Replace entries outside ``mask`` with a harmless ``fill`` value."""
    return np.where(mask, v, fill)


def xlogy(a, g):
    """``a * log(g)`` with ``0 * log(0) = 0``."""
    a = arr(a)
    g = arr(g)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(a == 0, 0.0, a * np.log(g))


def poisson_logpmf(j, g):
    """log P(Poisson(g) = j) for integer-valued ``j`` (any sign) and ``g >= 0``."""
    j = arr(j)
    g = arr(g)
    jj = np.maximum(j, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        v = xlogy(jj, g) - g - log_gamma(jj + 1.0)
    return np.where(j < 0, NEG_INF, v)


def finish(logv, mask=None):
    logv = arr(logv)
    if mask is not None:
        logv = np.where(mask, logv, NEG_INF)
    return out(logv)


def exp_out(logv):
    return out(np.exp(arr(logv)))


def check_decreasing(times, name="times"):
    times = arr(times)
    if times.ndim == 0 or times.shape[-1] < 1:
        raise DomainError(f"{name} must hold at least one time")
    if times.shape[-1] > 1 and not np.all(np.diff(times, axis=-1) < 0):
        raise DomainError(f"{name} must be strictly decreasing, got {times!r}")
    return times
