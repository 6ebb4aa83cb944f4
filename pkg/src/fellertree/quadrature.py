"""Adaptive quadrature with the package's default tolerances.

Thin layer over QUADPACK (``scipy.integrate.quad``), which handles
semi-infinite ranges by its own change of variables, and over scipy's
vectorized adaptive cubature for rectangles in two dimensions.
"""
from __future__ import annotations

import math
import warnings

import numpy as np
from scipy import integrate

from .errors import ConvergenceError

EPSABS = 1e-10
EPSREL = 1e-8
LIMIT = 10_000


def integrate_1d(f, a: float, b: float, *, epsabs: float = EPSABS, epsrel: float = EPSREL,
                 limit: int = LIMIT, points=None, strict: bool = False) -> float:
    """Integral of ``f`` over ``(a, b)``; infinite endpoints are allowed.

    With ``strict=True`` a QUADPACK accuracy warning becomes a ConvergenceError.
    """
    kw = dict(epsabs=epsabs, epsrel=epsrel, limit=limit)
    if points is not None and math.isfinite(a) and math.isfinite(b):
        kw["points"] = points
    with warnings.catch_warnings():
        warnings.simplefilter("error" if strict else "ignore", integrate.IntegrationWarning)
        try:
            val, _ = integrate.quad(lambda u: float(f(u)), a, b, **kw)
        except integrate.IntegrationWarning as exc:
            raise ConvergenceError(str(exc)) from exc
    return val


def integrate_2d(f, a: float, b: float, c: float, d: float, *, epsabs: float = EPSABS,
                 epsrel: float = EPSREL, limit: int = LIMIT) -> float:
    """Integral of the vectorized ``f(s, z)`` over the rectangle ``(a, b) x (c, d)``.

    Uses an adaptive tensor-product Gauss-Kronrod rule; limits may be infinite.
    """
    def g(pts):
        return np.asarray(f(pts[:, 0], pts[:, 1]), dtype=float)

    res = integrate.cubature(g, [a, c], [b, d], rule="gk21", rtol=epsrel, atol=epsabs,
                             max_subdivisions=limit)
    if res.status != "converged":
        raise ConvergenceError(f"2-D cubature did not converge (error {res.error:.3g})")
    return float(res.estimate)
