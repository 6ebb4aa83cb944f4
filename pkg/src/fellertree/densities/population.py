"""Posterior densities of past populations and of the founding time."""
from __future__ import annotations

import numpy as np

from .. import kernel
from ..errors import DomainError
from ._common import arr, exp_out, finish, out, positive, safe
from .regimes import FixedT1, InfT1
from .transition import log_transition_density


def log_past_pop_density(z, s, x, regime, p):
    if not isinstance(regime, (FixedT1, InfT1)):
        raise DomainError("past_pop_density is defined for FixedT1 and InfT1")
    a = abs(kernel.as_alpha(p))
    x = positive(x, "x")
    s = arr(s)
    if isinstance(regime, FixedT1):
        t = regime.t
        if not np.all((s > 0) & (s < t)):
            raise DomainError(f"need 0 < s < t = {t}, got {s!r}")
    elif not np.all(s > 0):
        raise DomainError(f"need s > 0, got {s!r}")
    z = arr(z)
    ok = z > 0
    zz = safe(z, ok, 1.0)
    lf = arr(log_transition_density(zz, x, s, a).density)
    if isinstance(regime, FixedT1):
        v = (arr(kernel.log_mu_over_beta(t - s, a)) - kernel.log_mu_over_beta(t, a)
             - zz * arr(kernel.inv_beta(t - s, a)) + x * kernel.inv_beta(t, a) + lf)
    else:
        v = a * s + lf
    return finish(v, ok)


def past_pop_density(z, s, x, regime, p):
    """Density of ``X(t - s)`` at ``z > 0`` given a single founder and ``X(t) = x``."""
    return exp_out(log_past_pop_density(z, s, x, regime, p))


def log_posterior_t1_density(t, x, p):
    a = abs(kernel.as_alpha(p))
    x = positive(x, "x")
    t = arr(t)
    ok = t > 0
    tt = safe(t, ok, 1.0)
    v = np.log(x / 2.0) + arr(kernel.log_mu_over_beta(tt, a)) - x * arr(kernel.inv_beta(tt, a))
    return finish(v, ok)


def posterior_t1_density(t, x, p):
    """Posterior density of the founder time under an improper uniform prior."""
    return exp_out(log_posterior_t1_density(t, x, p))


def posterior_t1_cdf(t, x, p):
    """P(T1 < t | x) = exp(-x / beta(t; |alpha|))."""
    a = abs(kernel.as_alpha(p))
    x = positive(x, "x")
    t = arr(t)
    ok = t > 0
    v = np.exp(-x * arr(kernel.inv_beta(safe(t, ok, 1.0), a)))
    return out(np.where(ok, v, 0.0))


def log_posterior_x0_density(x0, x, t, p):
    alpha = kernel.as_alpha(p)
    x = positive(x, "x")
    t = positive(t, "t")
    x0 = arr(x0)
    ok = x0 > 0
    lf = arr(log_transition_density(safe(x0, ok, 1.0), x, t, alpha).density)
    return finish(alpha * t + lf, ok)


def posterior_x0_density(x0, x, t, p):
    """Posterior density of ``X(0)`` under an improper uniform prior, given ``X(t) = x``."""
    return exp_out(log_posterior_x0_density(x0, x, t, p))


def posterior_x0_density_exp_prior(x0, x, t, p, eps):
    """Posterior of ``X(0)`` under an exponential prior with rate ``eps``.

    The normalizing integral has the closed form
    ``mu / ((mu + eps)^2 beta) * exp(-(x / beta) eps / (mu + eps))``.
    """
    alpha = kernel.as_alpha(p)
    eps = float(eps)
    if not eps > 0:
        raise DomainError(f"eps must be positive, got {eps}")
    x = positive(x, "x")
    t = positive(t, "t")
    x0 = arr(x0)
    ok = x0 > 0
    lf = arr(log_transition_density(safe(x0, ok, 1.0), x, t, alpha).density)
    mu = kernel.mu(t, alpha)
    lmu = kernel.log_mu(t, alpha)
    lbeta = kernel.log_beta(t, alpha)
    ib = kernel.inv_beta(t, alpha)
    log_norm = lmu - 2.0 * np.log(mu + eps) - lbeta - x * ib * eps / (mu + eps)
    return exp_out(finish(lf - eps * x0 - log_norm, ok))
