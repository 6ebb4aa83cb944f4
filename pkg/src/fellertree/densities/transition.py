"""Transition law of the Feller diffusion started from ``x0``.

The law at time ``t`` is an atom ``exp(-x0 mu)`` at zero plus a Poisson
mixture of gamma densities: ``L ~ Poisson(x0 mu)`` founding families, each
of exponential size with mean ``beta``.  The continuous part is evaluated
in closed form through ``I_1``.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np
from scipy import stats

from .. import kernel
from ..errors import ConvergenceError, DomainError
from ..special import log_bessel_i, log_gamma
from ._common import NEG_INF, arr, exp_out, finish, int_arr, nonneg, out, positive


class DensityWithAtom(NamedTuple):
    """Continuous density at a point plus the mass of the atom at zero."""

    density: float
    atom: float


def log_transition_density(x0, x, t, p) -> DensityWithAtom:
    """Log of :func:`transition_density`, both components."""
    alpha = kernel.as_alpha(p)
    x0 = nonneg(x0, "x0")
    x = nonneg(x, "x")
    t = positive(t, "t")
    lmu = arr(kernel.log_mu(t, alpha))
    lbeta = arr(kernel.log_beta(t, alpha))
    ibeta = arr(kernel.inv_beta(t, alpha))
    mu = np.exp(lmu)
    x0, x = np.broadcast_arrays(x0, x)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_atom = -x0 * mu
        lx0 = np.log(x0)
        # w^2 = x x0 mu / beta
        log_w = 0.5 * (np.log(x) + lx0 + lmu - lbeta)
        w2 = 2.0 * np.exp(log_w)
        lbes = arr(log_bessel_i(1, w2))
        cont = (-x0 * mu - x * ibeta + 0.5 * (lx0 + lmu - np.log(x) - lbeta)
                + lbes)
        # limit x -> 0: density tends to x0 mu / beta * exp(-x0 mu)
        at_zero = -x0 * mu + lx0 + lmu - lbeta
    cont = np.where(x == 0, at_zero, cont)
    cont = np.where(x0 == 0, NEG_INF, cont)
    return DensityWithAtom(out(cont), out(log_atom))


def transition_density(x0, x, t, p) -> DensityWithAtom:
    """Continuous density ``f(x0, x; t)`` and the extinction atom ``exp(-x0 mu(t))``."""
    ld, la = log_transition_density(x0, x, t, p)
    return DensityWithAtom(exp_out(ld), exp_out(la))


def log_transition_density_component(l, x0, x, t, p):
    """log f_l: ``l`` founders at time 0 and final population ``x``."""
    alpha = kernel.as_alpha(p)
    l = int_arr(l, "l")
    if np.any(l < 1):
        raise DomainError(f"l must be >= 1, got {l!r}")
    x0 = positive(x0, "x0")
    x = positive(x, "x")
    t = positive(t, "t")
    lmu = arr(kernel.log_mu(t, alpha))
    lbeta = arr(kernel.log_beta(t, alpha))
    mu = np.exp(lmu)
    v = (l * (np.log(x0) + lmu) - log_gamma(l + 1.0) - x0 * mu
         + (l - 1.0) * np.log(x) - x * arr(kernel.inv_beta(t, alpha))
         - l * lbeta - log_gamma(l))
    return finish(v)


def transition_density_component(l, x0, x, t, p):
    """Poisson(x0 mu) probability of ``l`` founders times their Gamma(l, beta) density."""
    return exp_out(log_transition_density_component(l, x0, x, t, p))


def transition_density_series(x0, x, t, p, terms: int = 200):
    """Continuous density by direct summation of the first ``terms`` components."""
    ls = np.arange(1, terms + 1, dtype=float)
    logs = arr(log_transition_density_component(ls, x0, x, t, p))
    top = logs.max()
    return float(np.exp(top) * np.sum(np.exp(logs - top)))


def transition_cdf(x0, x, t, p, tol: float = 1e-15, max_terms: int = 100_000):
    """P(X(t) <= x | X(0) = x0), atom included."""
    alpha = kernel.as_alpha(p)
    x0 = float(x0)
    x = arr(x)
    mu = kernel.mu(t, alpha)
    b = kernel.beta(t, alpha)
    lam = x0 * mu
    total = np.full(x.shape, np.exp(-lam))
    # truncate the Poisson mixture well past its bulk
    hi = int(max(lam + 12.0 * np.sqrt(lam + 1.0) + 20.0, 50.0))
    hi = min(hi, max_terms)
    ls = np.arange(1, hi + 1)
    w = stats.poisson.pmf(ls, lam)
    if w[-1] > tol:
        raise ConvergenceError("transition_cdf Poisson tail too heavy")
    g = stats.gamma.cdf(x[..., None], ls, scale=b)
    total = total + np.sum(w * g, axis=-1)
    return out(np.minimum(total, 1.0))


def log_cpe_density(z_val, xi) -> DensityWithAtom:
    """Log of :func:`cpe_density`."""
    z = nonneg(z_val, "z")
    xi = positive(xi, "xi")
    z, xi = np.broadcast_arrays(z, xi)
    with np.errstate(divide="ignore", invalid="ignore"):
        rz = np.sqrt(z)
        cont = (np.log(xi) - xi * (1.0 + z) + arr(log_bessel_i(1, 2.0 * xi * rz))
                - 0.5 * np.log(z))
        at_zero = 2.0 * np.log(xi) - xi
    cont = np.where(z == 0, at_zero, cont)
    return DensityWithAtom(out(cont), out(-xi))


def cpe_density(z_val, xi) -> DensityWithAtom:
    """Compound Poisson-exponential law: Poisson(xi) terms, each exponential with mean 1/xi."""
    ld, la = log_cpe_density(z_val, xi)
    return DensityWithAtom(exp_out(ld), exp_out(la))
