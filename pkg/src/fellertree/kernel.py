"""
Elementary functions of the Feller diffusion with growth rate ``alpha``.

The transition law of the diffusion with generator
``(1/2) x d^2/dx^2 + alpha x d/dx`` is a Poisson mixture of gamma laws
whose parameters are

    mu(t)   = 2 alpha e^{alpha t} / (e^{alpha t} - 1)
    beta(t) = (e^{alpha t} - 1) / (2 alpha)

with the critical values ``mu(t) = 2/t`` and ``beta(t) = t/2`` at
``alpha = 0``.  Everything here accepts scalars or numpy arrays for the
time arguments; ``alpha`` is always a scalar.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

# Below this |alpha t| the expm1 forms are replaced by Taylor expansions.
SMALL_AT = 1e-5


@dataclass(frozen=True)
class DiffusionParams:
    """Growth parameter of a Feller diffusion (units of 1/time)."""

    alpha: float

    def __post_init__(self):
        if not math.isfinite(self.alpha):
            raise DomainError(f"alpha must be finite, got {self.alpha!r}")

    @property
    def criticality(self) -> str:
        if self.alpha < 0:
            return "subcritical"
        if self.alpha > 0:
            return "supercritical"
        return "critical"

    def mu(self, t):
        return mu(t, self.alpha)

    def beta(self, t):
        return beta(t, self.alpha)

    def __abs__(self):
        return DiffusionParams(abs(self.alpha))

    def __neg__(self):
        return DiffusionParams(-self.alpha)


@dataclass(frozen=True)
class TimePair:
    """A horizon ``t`` and a time ``s`` measured back from it."""

    t: float
    s: float

    def __post_init__(self):
        if not (0.0 <= self.s <= self.t):
            raise DomainError(f"need 0 <= s <= t, got s={self.s}, t={self.t}")

    @property
    def forward(self) -> float:
        """The absolute time ``t - s`` at which the past state is observed."""
        return self.t - self.s


def as_alpha(p) -> float:
    """Accept either a bare float or a :class:`DiffusionParams`."""
    if isinstance(p, DiffusionParams):
        return p.alpha
    a = float(p)
    if not math.isfinite(a):
        raise DomainError(f"alpha must be finite, got {p!r}")
    return a


def _times(t, name="t", allow_inf=False):
    arr = np.asarray(t, dtype=float)
    ok = arr > 0
    if not allow_inf:
        ok &= np.isfinite(arr)
    if not np.all(ok):
        raise DomainError(f"{name} must be positive, got {t!r}")
    return arr


def _out(x):
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x


def mu(t, alpha):
    """``mu(t; alpha)``; ``t = inf`` is accepted and gives the limit."""
    a = as_alpha(alpha)
    t = _times(t, allow_inf=True)
    if a == 0.0:
        return _out(2.0 / t)
    at = a * t
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        taylor = (2.0 / t) * (1.0 + at / 2.0 + at * at / 12.0)
        exact = -2.0 * a / np.expm1(-at)
    return _out(np.where(np.abs(at) < SMALL_AT, taylor, exact))


def beta(t, alpha):
    """``beta(t; alpha)``, the mean family size at time ``t``."""
    a = as_alpha(alpha)
    t = _times(t, allow_inf=True)
    if a == 0.0:
        return _out(t / 2.0)
    at = a * t
    with np.errstate(over="ignore", invalid="ignore"):
        taylor = (t / 2.0) * (1.0 + at / 2.0 + at * at / 6.0)
        exact = np.expm1(at) / (2.0 * a)
    return _out(np.where(np.abs(at) < SMALL_AT, taylor, exact))


def inv_beta(t, alpha):
    """``1/beta(t; alpha)`` without overflow for large ``alpha t``."""
    a = as_alpha(alpha)
    t = _times(t, allow_inf=True)
    if a == 0.0:
        return _out(2.0 / t)
    at = a * t
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        taylor = (2.0 / t) * (1.0 - at / 2.0 + at * at / 12.0)
        exact = 2.0 * a / np.expm1(at)
    return _out(np.where(np.abs(at) < SMALL_AT, taylor, exact))


def log_mu(t, alpha):
    a = as_alpha(alpha)
    t = _times(t)
    if a == 0.0:
        return _out(np.log(2.0 / t))
    at = a * t
    aat = np.abs(at)
    with np.errstate(divide="ignore", invalid="ignore"):
        taylor = np.log(2.0 / t) + np.log1p(at / 2.0 + at * at / 12.0)
        if a > 0:
            exact = math.log(2.0 * a) - np.log(-np.expm1(-aat))
        else:
            # mu = 2|a| / (e^{|a|t} - 1)
            exact = math.log(-2.0 * a) - aat - np.log(-np.expm1(-aat))
    return _out(np.where(aat < SMALL_AT, taylor, exact))


def log_beta(t, alpha):
    a = as_alpha(alpha)
    t = _times(t)
    if a == 0.0:
        return _out(np.log(t / 2.0))
    at = a * t
    aat = np.abs(at)
    with np.errstate(divide="ignore", invalid="ignore"):
        taylor = np.log(t / 2.0) + np.log1p(at / 2.0 + at * at / 6.0)
        if a > 0:
            exact = aat + np.log(-np.expm1(-aat)) - math.log(2.0 * a)
        else:
            exact = np.log(-np.expm1(-aat)) - math.log(-2.0 * a)
    return _out(np.where(aat < SMALL_AT, taylor, exact))


def log_mu_over_beta(t, alpha):
    """``log(mu(t)/beta(t))``; invariant under ``alpha -> -alpha``."""
    return _out(np.asarray(log_mu(t, alpha)) - np.asarray(log_beta(t, alpha)))


def beta_inv(b, alpha):
    """Inverse of ``beta(., alpha)``: the time ``t`` with ``beta(t) = b``."""
    a = as_alpha(alpha)
    b = np.asarray(b, dtype=float)
    if not np.all(b > 0):
        raise DomainError(f"b must be positive, got {b!r}")
    if a == 0.0:
        return _out(2.0 * b)
    arg = 2.0 * a * b
    if a < 0 and np.any(arg <= -1.0):
        raise DomainError(
            f"beta(., {a}) is bounded by {1.0 / (2 * abs(a))}; got b={b!r}")
    series = 2.0 * b * (1.0 - arg / 2.0 + arg * arg / 3.0 - arg ** 3 / 4.0)
    return _out(np.where(np.abs(arg) < SMALL_AT, series, np.log1p(arg) / a))


def time_at_inv_beta(v, alpha):
    """The time ``s`` with ``1/beta(s; alpha) = v``.

    ``v = 0`` maps to ``s = inf`` when ``alpha >= 0``.
    """
    a = as_alpha(alpha)
    v = np.asarray(v, dtype=float)
    floor = -2.0 * a if a < 0 else 0.0
    if np.any(v < floor) or np.any(v == floor) and a < 0:
        raise DomainError(f"1/beta(., {a}) exceeds {floor}; got {v!r}")
    with np.errstate(divide="ignore", invalid="ignore"):
        if a == 0.0:
            return _out(2.0 / v)
        y = 2.0 * a / v
        # log1p(y) / a in subnormal arithmetic loses every digit for tiny a
        series = (2.0 / v) * (1.0 - y / 2.0 + y * y / 3.0 - y ** 3 / 4.0)
        return _out(np.where(np.abs(y) < SMALL_AT, series, np.log1p(y) / a))


def eta(s, t, alpha):
    """``1/beta(s) - 1/beta(t)``; ``t = inf`` is allowed.

    For finite ``s < t`` the difference is evaluated as
    ``e^{alpha s} beta(t - s) / (beta(s) beta(t))``, which has no cancellation.
    """
    a = as_alpha(alpha)
    s = _times(s, "s")
    t = _times(t, "t", allow_inf=True)
    s, t = np.broadcast_arrays(s, t)
    direct = np.asarray(inv_beta(s, a)) - np.asarray(inv_beta(t, a))
    m = np.isfinite(t) & (s < t)
    if not np.any(m):
        return _out(direct)
    ss, tt = np.where(m, s, 1.0), np.where(m, t, 2.0)
    stable = np.exp(a * ss + np.asarray(log_beta(tt - ss, a)) - np.asarray(log_beta(ss, a))
                    - np.asarray(log_beta(tt, a)))
    return _out(np.where(m, stable, direct))


def capital_u(t, s, alpha):
    """``U(t, s) = 1/beta(t - s) + mu(s)`` for ``0 < s < t``."""
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    if not np.all((s > 0) & (s < t)):
        raise DomainError(f"need 0 < s < t, got s={s!r}, t={t!r}")
    return _out(np.asarray(inv_beta(t - s, alpha)) + np.asarray(mu(s, alpha)))
