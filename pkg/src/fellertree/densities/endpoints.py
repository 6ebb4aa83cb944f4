"""Founder counts when both the initial and final populations are known."""
from __future__ import annotations

import math

import numpy as np

from .. import kernel
from ..errors import DomainError
from ..special import log_bessel_i, log_gamma
from ._common import arr, exp_out, finish, int_arr, out, positive


def bessel_argument(x0, x, t, p):
    """``w = sqrt(x x0 mu(t) / beta(t))``, equivalently ``alpha sqrt(x x0) / sinh(alpha t / 2)``."""
    alpha = kernel.as_alpha(p)
    x0 = positive(x0, "x0")
    x = positive(x, "x")
    return out(np.exp(0.5 * (np.log(x0) + np.log(x) + arr(kernel.log_mu_over_beta(t, alpha)))))


def log_ancestors_pmf_both_endpoints(l, x0, x, t, p):
    l = int_arr(l, "l")
    w = arr(bessel_argument(x0, x, t, p))
    ok = l >= 1
    ll = np.where(ok, l, 1.0)
    v = ((2.0 * ll - 1.0) * np.log(w) - log_gamma(ll + 1.0) - log_gamma(ll)
         - arr(log_bessel_i(1, 2.0 * w)))
    return finish(v, ok)


def ancestors_pmf_both_endpoints(l, x0, x, t, p):
    """P(l founders at time 0 | X(0) = x0, X(t) = x)."""
    return exp_out(log_ancestors_pmf_both_endpoints(l, x0, x, t, p))


def log_sample_ancestors_pmf_both_endpoints(k, n, x0, x, t, p):
    n = int(n)
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    k = int_arr(k)
    w = arr(bessel_argument(x0, x, t, p))
    ok = (k >= 1) & (k <= n)
    kk = np.where(ok, k, 1.0)
    log_binom = math.lgamma(n) - log_gamma(kk) - log_gamma(n - kk + 1.0)
    v = (math.lgamma(n + 1.0) - log_gamma(kk + 1.0) + log_binom
         - (n - kk) * np.log(w) + arr(log_bessel_i(kk + n - 1.0, 2.0 * w))
         - arr(log_bessel_i(1, 2.0 * w)))
    return finish(v, ok)


def sample_ancestors_pmf_both_endpoints(k, n, x0, x, t, p):
    """P(a sample of ``n`` has ``k`` founders at time 0 | X(0) = x0, X(t) = x)."""
    return exp_out(log_sample_ancestors_pmf_both_endpoints(k, n, x0, x, t, p))
