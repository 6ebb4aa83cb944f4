"""Ancestor counts of the whole population and of finite samples.

Conditioned on the current population ``x`` the whole-population count is
a (shifted) Poisson variable whose rate depends on the regime:

    FixedT1(t)  1 + Poisson(x eta(s, t)),  eta = 1/beta(s) - 1/beta(t)
    InfT1       1 + Poisson(x / beta(s))
    UnifT1          Poisson(x / beta(s))     (k = 0 allowed)
    UnifX0(t)   1 + Poisson(x / beta(t))

with ``beta`` evaluated at ``|alpha|`` except for the UnifX0 count.  Sample
counts follow from the hypergeometric thinning of an exchangeable tree.
"""
from __future__ import annotations

import math

import numpy as np

from .. import kernel
from ..errors import ConvergenceError, DomainError
from ..special import log_gamma, log_gauss_2f1, log_kummer_1f1
from ._common import (NEG_INF, arr, exp_out, finish, int_arr, out, poisson_logpmf,
                      positive, xlogy)
from .regimes import FixedT1, InfT1, UnifT1, UnifX0

SERIES_TOL = 1e-14
SERIES_MAX_TERMS = 1_000_000
_CHUNK = 4096


# ---------------------------------------------------------------------------
# final population


def log_final_pop_density(x, regime, p):
    """log of the exponential final-population density with mean beta(t)."""
    if not isinstance(regime, FixedT1):
        raise DomainError("final_pop_density is defined for FixedT1 only")
    alpha = kernel.as_alpha(p)
    x = arr(x)
    t = regime.t
    v = -kernel.log_beta(t, alpha) - x * kernel.inv_beta(t, alpha)
    return finish(v, x > 0)


def final_pop_density(x, regime, p):
    """Density of ``X(t)`` given a single founder at ``t`` and survival."""
    return exp_out(log_final_pop_density(x, regime, p))


def final_pop_cdf(x, regime, p):
    if not isinstance(regime, FixedT1):
        raise DomainError("final_pop_cdf is defined for FixedT1 only")
    alpha = kernel.as_alpha(p)
    x = np.maximum(arr(x), 0.0)
    return out(-np.expm1(-x * kernel.inv_beta(regime.t, alpha)))


# ---------------------------------------------------------------------------
# whole-population ancestors


def _check_s(s, regime):
    s = arr(s)
    if isinstance(regime, FixedT1):
        if not np.all((s > 0) & (s <= regime.t)):
            raise DomainError(f"need 0 < s <= t = {regime.t}, got s={s!r}")
    elif isinstance(regime, (InfT1, UnifT1)):
        if not np.all((s > 0) & np.isfinite(s)):
            raise DomainError(f"need s > 0, got {s!r}")
    return s


def ancestor_rate(s, x, regime, p):
    """The Poisson rate ``g`` of the regime's ancestor-count law at time ``s``."""
    alpha = kernel.as_alpha(p)
    a = abs(alpha)
    x = positive(x, "x")
    if isinstance(regime, UnifX0):
        if s is not None and not np.all(arr(s) == regime.t):
            raise DomainError("UnifX0 ancestor counts are defined at s = t only")
        return out(x * kernel.inv_beta(regime.t, alpha))
    s = _check_s(s, regime)
    if isinstance(regime, FixedT1):
        return out(x * kernel.eta(s, regime.t, a))
    if isinstance(regime, (InfT1, UnifT1)):
        return out(x * kernel.inv_beta(s, a))
    raise DomainError(f"unsupported regime {regime!r}")


def log_ancestors_pmf(k, s, x, regime, p):
    k = int_arr(k)
    g = arr(ancestor_rate(s, x, regime, p))
    shift = 0.0 if isinstance(regime, UnifT1) else 1.0
    return finish(poisson_logpmf(k - shift, g))


def ancestors_pmf(k, s, x, regime, p):
    """P(A(s) = k | X = x) under ``regime``; zero outside the support."""
    return exp_out(log_ancestors_pmf(k, s, x, regime, p))


# ---------------------------------------------------------------------------
# without conditioning on x


def _beta_ratio(s, t, alpha):
    """``r = beta(s)/beta(t)`` and ``1 - r`` without cancellation, for 0 <= s <= t."""
    s = arr(s)
    r = np.zeros(s.shape)
    u = np.ones(s.shape)
    m = s > 0
    if np.any(m):
        d = arr(kernel.log_beta(np.where(m, s, t), alpha)) - kernel.log_beta(t, alpha)
        r = np.where(m, np.exp(d), 0.0)
        u = np.where(m, -np.expm1(d), 1.0)
    return r, u


def log_ancestors_pmf_unconditioned_x(k, s, regime, p):
    if not isinstance(regime, FixedT1):
        raise DomainError("unconditioned-x ancestor law is defined for FixedT1 only")
    alpha = kernel.as_alpha(p)
    k = int_arr(k)
    s = _check_s(s, regime)
    r, u = _beta_ratio(s, regime.t, alpha)
    kk = np.maximum(k, 1.0)
    with np.errstate(divide="ignore"):
        v = np.log(r) + xlogy(kk - 1.0, u)
    return finish(v, k >= 1)


def ancestors_pmf_unconditioned_x(k, s, regime, p):
    """Geometric law with success probability beta(s)/beta(t)."""
    return exp_out(log_ancestors_pmf_unconditioned_x(k, s, regime, p))


# ---------------------------------------------------------------------------
# finite samples, conditioned on x


def _log_falling(n, k):
    return log_gamma(n + 1.0) - log_gamma(n - k + 1.0)


def _log_rising(n, k):
    return log_gamma(n + k) - log_gamma(n)


def log_sample_ancestors_pmf(k, n, s, x, regime, p):
    if not isinstance(regime, (FixedT1, InfT1)):
        raise DomainError("sample ancestor law is defined for FixedT1 and InfT1")
    k = int_arr(k)
    n = int_arr(n, "n")
    if np.any(n < 1):
        raise DomainError(f"n must be >= 1, got {n!r}")
    g = arr(ancestor_rate(s, x, regime, p))
    k, n, g = np.broadcast_arrays(k, n, g)
    ok = (k >= 1) & (k <= n)
    ks = np.where(ok, k, 1.0)
    v = (_log_falling(n, ks) - _log_rising(n, ks) - log_gamma(ks)
         + xlogy(ks - 1.0, g) - g + arr(log_kummer_1f1(ks + 1.0, ks + n, g)))
    return finish(v, ok)


def sample_ancestors_pmf(k, n, s, x, regime, p):
    """P(A_n(s) = k | X = x) for a uniform sample of size ``n``."""
    return exp_out(log_sample_ancestors_pmf(k, n, s, x, regime, p))


# ---------------------------------------------------------------------------
# finite samples, unconditioned on x


def _log_sampled_series(k, n, r, u):
    """log of sum_{l>=k} C(l,k) n!/l_(n) C(n-1,k-1) r (1-r)^(l-1)."""
    if r >= 1.0:
        return 0.0 if k == 1 else NEG_INF
    lu = math.log(u) if u < 1.0 else math.log1p(-r)
    log_c = math.lgamma(n) - math.lgamma(k) - math.lgamma(n - k + 1)
    first = (math.lgamma(n + 1) + math.lgamma(k) - math.lgamma(k + n)
             + log_c + math.log(r) + (k - 1) * lu)
    top = first
    total = 0.0
    l0 = k
    log_last = first
    for _ in range(0, SERIES_MAX_TERMS, _CHUNK):
        ls = np.arange(l0, l0 + _CHUNK, dtype=float)
        # ratio t_{l+1}/t_l
        lr = np.log(ls + 1.0) - np.log(ls + 1.0 - k) + np.log(ls) - np.log(ls + n) + lu
        logs = log_last + np.concatenate(([0.0], np.cumsum(lr[:-1])))
        ctop = logs.max()
        if ctop > top:
            total *= math.exp(top - ctop)
            top = ctop
        total += np.sum(np.exp(logs - top))
        log_last = logs[-1] + lr[-1]
        l0 += _CHUNK
        # future ratios climb or fall monotonically towards 1 - r
        q = max(math.exp(lr[-1]), u)
        if q < 1.0:
            tail = math.exp(log_last - top) / (1.0 - q)
            if tail < SERIES_TOL * total:
                return top + math.log(total)
    raise ConvergenceError(
        f"sampled-ancestor series for k={k}, n={n}, r={r} needs over "
        f"{SERIES_MAX_TERMS} terms")


def log_sample_ancestors_pmf_unconditioned_x(k, n, s, regime, p):
    if not isinstance(regime, FixedT1):
        raise DomainError("defined for FixedT1 only")
    alpha = kernel.as_alpha(p)
    s = _check_s(s, regime)
    k = int_arr(k)
    n = int_arr(n, "n")
    if np.any(n < 1):
        raise DomainError(f"n must be >= 1, got {n!r}")
    r, u = _beta_ratio(s, regime.t, alpha)
    k, n, r, u = np.broadcast_arrays(k, n, r, u)
    res = np.full(k.shape, NEG_INF)
    for idx in np.ndindex(k.shape):
        kk, nn = int(k[idx]), int(n[idx])
        if 1 <= kk <= nn:
            res[idx] = _log_sampled_series(kk, nn, float(r[idx]), float(u[idx]))
    return out(res)


def sample_ancestors_pmf_unconditioned_x(k, n, s, regime, p):
    """P(A_n(s) = k | T1 = t) by adaptive summation over the population count."""
    return exp_out(log_sample_ancestors_pmf_unconditioned_x(k, n, s, regime, p))


def sample_mrca_cdf(n, s, regime, p):
    """P(T2^(n) < s | T1 = t) = r 2F1(2, 1; n + 1; 1 - r), r = beta(s)/beta(t)."""
    if not isinstance(regime, FixedT1):
        raise DomainError("sample_mrca_cdf is defined for FixedT1 only")
    alpha = kernel.as_alpha(p)
    n = int(n)
    if n < 2:
        raise DomainError(f"need a sample of at least 2, got n={n}")
    s = arr(s)
    if not np.all((s >= 0) & (s <= regime.t)):
        raise DomainError(f"need 0 <= s <= t = {regime.t}")
    r, u = _beta_ratio(s, regime.t, alpha)
    with np.errstate(divide="ignore"):
        lr = np.log(r)
    uu = np.where(r > 0, u, 0.0)
    v = np.exp(lr + arr(log_gauss_2f1(2.0, 1.0, n + 1.0, uu)))
    v = np.where(r > 0, v, 0.0)
    return out(np.minimum(v, 1.0))


def pair_mrca_cdf(s, regime, p):
    """Closed-form CDF of the MRCA time of two sampled individuals."""
    if not isinstance(regime, FixedT1):
        raise DomainError("pair_mrca_cdf is defined for FixedT1 only")
    alpha = kernel.as_alpha(p)
    s = arr(s)
    if not np.all((s >= 0) & (s <= regime.t)):
        raise DomainError(f"need 0 <= s <= t = {regime.t}")
    r, u = _beta_ratio(s, regime.t, alpha)
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = -2.0 * r / u - 2.0 * r * np.log(r) / (u * u)
    # near s = t the two terms cancel; use sum_j u^j/(j+2) instead
    j = np.arange(30)
    small = 2.0 * r * np.sum(arr(u)[..., None] ** j / (j + 2.0), axis=-1)
    v = np.where(u < 1e-2, small, direct)
    v = np.where(r > 0, v, 0.0)
    return out(np.clip(v, 0.0, 1.0))
