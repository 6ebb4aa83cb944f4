"""Joint density of the population MRCA time T2 and its population size."""
from __future__ import annotations

import numpy as np

from .. import kernel
from ..errors import DomainError
from ._common import LOG2, arr, exp_out, finish, positive, safe
from .regimes import FixedT1, InfT1, UnifT1


def log_mrca_joint_density(s, z, x, regime, p):
    a = abs(kernel.as_alpha(p))
    x = positive(x, "x")
    s = arr(s)
    z = arr(z)
    s, z = np.broadcast_arrays(s, z)
    if isinstance(regime, FixedT1):
        t = regime.t
        ok = (s > 0) & (s < t) & (z > 0)
        ss = safe(s, ok, t / 2)
        zz = safe(z, ok, 1.0)
        lm = arr(kernel.log_mu(ss, a))
        lb = arr(kernel.log_beta(ss, a))
        v = (-LOG2 + 2.0 * lm + kernel.log_beta(t, a) + arr(kernel.log_mu(t - ss, a))
             - 2.0 * lb - kernel.log_mu(t, a) - arr(kernel.log_beta(t - ss, a))
             + np.log(zz) + np.log(x) - zz * arr(kernel.capital_u(t, ss, a))
             - x * arr(kernel.eta(ss, t, a)))
        return finish(v, ok)
    if isinstance(regime, (InfT1, UnifT1)):
        ok = (s > 0) & np.isfinite(s) & (z > 0)
        ss = safe(s, ok, 1.0)
        zz = safe(z, ok, 1.0)
        lm = arr(kernel.log_mu(ss, a))
        lmb = arr(kernel.log_mu_over_beta(ss, a))
        ib = arr(kernel.inv_beta(ss, a))
        mu = np.exp(lm)
        if isinstance(regime, InfT1):
            v = (lmb - LOG2 + np.log(x) - x * ib
                 + 2.0 * lm + np.log(zz) - zz * mu)
        else:
            v = -LOG2 + 2.0 * lmb + 2.0 * np.log(x) - x * ib - zz * mu
        return finish(v, ok)
    raise DomainError(f"MRCA joint density is not defined for {regime!r}")


def mrca_joint_density(s, z, x, regime, p):
    """Density of ``(T2, X_MRCA)`` at ``(s, z)`` given the current population ``x``."""
    return exp_out(log_mrca_joint_density(s, z, x, regime, p))
