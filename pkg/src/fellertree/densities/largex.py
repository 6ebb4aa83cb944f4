"""Universal limits for a supercritical population observed at large ``x``.

On the shifted scale ``alpha s~ = alpha s - log(2 alpha x)`` the coalescent
times of the T1 -> infinity regime converge to a Gumbel family, and the
MRCA population size becomes independent of the MRCA time.
"""
from __future__ import annotations

import math

import numpy as np

from .. import kernel
from ..errors import DomainError
from ..special import log_gamma
from ._common import arr, check_decreasing, exp_out, int_arr, out, positive


def _supercritical(p) -> float:
    alpha = kernel.as_alpha(p)
    if not alpha > 0:
        raise DomainError(f"shifted time needs alpha > 0, got {alpha}")
    return alpha


def shift(x, p):
    """The offset ``log(2 alpha x) / alpha`` between ``s`` and ``s~``."""
    alpha = _supercritical(p)
    x = positive(x, "x")
    return out(np.log(2.0 * alpha * x) / alpha)


def shifted_time(s, x, p):
    return out(arr(s) - arr(shift(x, p)))


def unshifted_time(s_tilde, x, p):
    return out(arr(s_tilde) + arr(shift(x, p)))


def log_largex_marginal(k, s_tilde, p):
    alpha = _supercritical(p)
    k = int_arr(k)
    if np.any(k < 2):
        raise DomainError(f"k must be >= 2, got {k!r}")
    st = arr(s_tilde)
    with np.errstate(over="ignore"):
        return out(math.log(alpha) - log_gamma(k - 1.0) - alpha * (k - 1.0) * st
                   - np.exp(-alpha * st))


def largex_marginal(k, s_tilde, p):
    """Limit density of the shifted coalescent time of index ``k``."""
    return exp_out(log_largex_marginal(k, s_tilde, p))


def log_largex_joint(times, p):
    alpha = _supercritical(p)
    st = check_decreasing(times)
    with np.errstate(over="ignore"):
        return out(np.sum(math.log(alpha) - alpha * st, axis=-1)
                   - np.exp(-alpha * st[..., -1]))


def largex_joint(times, p):
    return exp_out(log_largex_joint(times, p))


def log_largex_mrca_joint(s_tilde, z, p):
    alpha = _supercritical(p)
    st = arr(s_tilde)
    z = arr(z)
    with np.errstate(divide="ignore", over="ignore"):
        v = (math.log(alpha) - alpha * st - np.exp(-alpha * st)
             + math.log(4.0 * alpha * alpha) + np.log(z) - 2.0 * alpha * z)
    return out(np.where(z > 0, v, -np.inf))


def largex_mrca_joint(s_tilde, z, p):
    """Gumbel density for ``alpha T2~`` times Gamma(2, rate 2 alpha) for ``X_MRCA``."""
    return exp_out(log_largex_mrca_joint(s_tilde, z, p))
