"""Population coalescent times T_k.

Given the current population ``x`` the coalescent times are the points of
an inhomogeneous Poisson process.  In the coordinate ``g(s)`` (see
:func:`coalescent_coordinate`) the points are the arrivals of a unit-rate
process, which gives the marginal and joint densities below.  All
x-conditioned forms are invariant under ``alpha -> -alpha``; the forms
averaged over the exponential law of ``x`` are not.
"""
from __future__ import annotations

import numpy as np
from scipy import special as sps

from .. import kernel
from ..errors import DomainError
from ..special import log_gamma
from ._common import (LOG2, arr, check_decreasing, exp_out, finish, int_arr, out,
                      positive, safe, xlogy)
from .ancestors import _beta_ratio
from .regimes import FixedT1, InfT1, UnifT1

_REGIMES = (FixedT1, InfT1, UnifT1)


def _first_index(regime):
    """Smallest coalescent index whose time is random."""
    return 1 if isinstance(regime, UnifT1) else 2


def _support(s, regime):
    s = arr(s)
    if isinstance(regime, FixedT1):
        return (s > 0) & (s < regime.t)
    return (s > 0) & np.isfinite(s)


def coalescent_coordinate(s, x, regime, p):
    """``g(s)``: ``x eta(s, t)`` for FixedT1, ``x / beta(s)`` for InfT1 and UnifT1."""
    if not isinstance(regime, _REGIMES):
        raise DomainError(f"coalescent times are not defined for {regime!r}")
    a = abs(kernel.as_alpha(p))
    x = positive(x, "x")
    s = arr(s)
    if isinstance(regime, FixedT1):
        return out(x * kernel.eta(s, regime.t, a))
    return out(x * kernel.inv_beta(s, a))


def _log_intensity(s, x, a):
    """log of x mu(s) / (2 beta(s)), the rate of -d g / ds."""
    return np.log(x) + arr(kernel.log_mu_over_beta(s, a)) - LOG2


def log_coalescent_time_marginal(k, s, x, regime, p):
    if not isinstance(regime, _REGIMES):
        raise DomainError(f"coalescent times are not defined for {regime!r}")
    k = int_arr(k)
    k0 = _first_index(regime)
    if np.any(k < k0):
        raise DomainError(f"k must be >= {k0} for {regime.tag}, got {k!r}")
    a = abs(kernel.as_alpha(p))
    x = positive(x, "x")
    s = arr(s)
    ok = _support(s, regime)
    fill = regime.t / 2 if isinstance(regime, FixedT1) else 1.0
    ss = safe(s, ok, fill)
    g = arr(coalescent_coordinate(ss, x, regime, p))
    j = k - k0
    v = xlogy(j, g) - log_gamma(j + 1.0) + _log_intensity(ss, x, a) - g
    return finish(v, ok)


def coalescent_time_marginal(k, s, x, regime, p):
    """Density of T_k at ``s`` given the current population ``x``."""
    return exp_out(log_coalescent_time_marginal(k, s, x, regime, p))


def coalescent_time_cdf(k, s, x, regime, p):
    """P(T_k <= s | x): the probability of fewer than ``k - k0 + 1`` arrivals by g(s)."""
    if not isinstance(regime, _REGIMES):
        raise DomainError(f"coalescent times are not defined for {regime!r}")
    k = int(k)
    k0 = _first_index(regime)
    if k < k0:
        raise DomainError(f"k must be >= {k0} for {regime.tag}")
    s = arr(s)
    ok = _support(s, regime)
    fill = regime.t / 2 if isinstance(regime, FixedT1) else 1.0
    g = arr(coalescent_coordinate(safe(s, ok, fill), x, regime, p))
    v = sps.gammaincc(k - k0 + 1, g)
    hi = (s >= regime.t) if isinstance(regime, FixedT1) else np.isinf(s)
    v = np.where(ok, v, np.where(hi, 1.0, 0.0))
    return out(v)


def log_coalescent_time_joint(times, x, regime, p):
    """Joint density of (T_k0, ..., T_k) with ``times`` on the last axis."""
    if not isinstance(regime, _REGIMES):
        raise DomainError(f"coalescent times are not defined for {regime!r}")
    times = check_decreasing(times)
    a = abs(kernel.as_alpha(p))
    x = positive(x, "x")
    ok = np.all(_support(times, regime), axis=-1)
    fill = regime.t / 2 if isinstance(regime, FixedT1) else 1.0
    tt = np.where(ok[..., None], times, fill)
    last = tt[..., -1]
    g = arr(coalescent_coordinate(last, x, regime, p))
    v = np.sum(_log_intensity(tt, x, a), axis=-1) - g
    return finish(v, ok)


def coalescent_time_joint(times, x, regime, p):
    return exp_out(log_coalescent_time_joint(times, x, regime, p))


# ---------------------------------------------------------------------------
# averaged over the final population, FixedT1 only


def log_coalescent_time_marginal_unconditioned_x(k, s, regime, p):
    if not isinstance(regime, FixedT1):
        raise DomainError("defined for FixedT1 only")
    alpha = kernel.as_alpha(p)
    k = int_arr(k)
    if np.any(k < 2):
        raise DomainError(f"k must be >= 2, got {k!r}")
    s = arr(s)
    ok = (s > 0) & (s <= regime.t)
    ss = safe(s, ok, regime.t / 2)
    r, u = _beta_ratio(ss, regime.t, alpha)
    v = (np.log(0.5 * (k - 1.0)) + arr(kernel.log_mu(ss, alpha))
         + np.log(r) + xlogy(k - 2.0, u))
    return finish(v, ok)


def coalescent_time_marginal_unconditioned_x(k, s, regime, p):
    """Density of T_k given T1 = t and survival, averaged over X(t)."""
    return exp_out(log_coalescent_time_marginal_unconditioned_x(k, s, regime, p))


def log_coalescent_time_joint_unconditioned_x(times, regime, p):
    if not isinstance(regime, FixedT1):
        raise DomainError("defined for FixedT1 only")
    alpha = kernel.as_alpha(p)
    times = check_decreasing(times)
    k = times.shape[-1] + 1
    ok = np.all((times > 0) & (times < regime.t), axis=-1)
    tt = np.where(ok[..., None], times, regime.t / 2)
    lb = arr(kernel.log_beta(tt, alpha))
    v = (log_gamma(float(k)) + k * lb[..., -1] - kernel.log_beta(regime.t, alpha)
         + np.sum(arr(kernel.log_mu(tt, alpha)) - LOG2 - lb, axis=-1))
    return finish(v, ok)


def coalescent_time_joint_unconditioned_x(times, regime, p):
    return exp_out(log_coalescent_time_joint_unconditioned_x(times, regime, p))
