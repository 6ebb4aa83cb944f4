"""Goodness-of-fit statistics used against Monte Carlo output."""
from __future__ import annotations

from typing import Callable, NamedTuple

import numpy as np
from scipy import stats

from .errors import DomainError


class TestResult(NamedTuple):
    statistic: float
    pvalue: float


def ks_test(sample, cdf: Callable) -> TestResult:
    """One-sample Kolmogorov-Smirnov test against a continuous CDF."""
    r = stats.kstest(np.asarray(sample, dtype=float), cdf)
    return TestResult(float(r.statistic), float(r.pvalue))


def lattice_ks(sample, cdf_on_lattice: Callable, support) -> float:
    """KS distance for integer-valued data, compared on the lattice only.

    ``sup_d |F_emp(d) - F(d)|`` over the integer points ``support``.  Use
    it when the data are a discretized continuous quantity, e.g. a
    generation count standing in for a continuous time.
    """
    sample = np.sort(np.asarray(sample))
    d = np.asarray(support)
    f_emp = np.searchsorted(sample, d, side="right") / sample.size
    f = np.asarray([cdf_on_lattice(v) for v in d], dtype=float)
    return float(np.max(np.abs(f_emp - f)))


def pool_bins(observed, expected, min_expected: float = 5.0):
    """Merge adjacent bins, left to right, until every expected count reaches ``min_expected``."""
    o = [float(v) for v in observed]
    e = [float(v) for v in expected]
    if len(o) != len(e) or not o:
        raise DomainError("observed and expected must be equal, nonempty lengths")
    po, pe = [], []
    acc_o = acc_e = 0.0
    for oi, ei in zip(o, e):
        acc_o += oi
        acc_e += ei
        if acc_e >= min_expected:
            po.append(acc_o)
            pe.append(acc_e)
            acc_o = acc_e = 0.0
    if acc_e > 0 or acc_o > 0:
        if po:
            po[-1] += acc_o
            pe[-1] += acc_e
        else:
            po.append(acc_o)
            pe.append(acc_e)
    return np.array(po), np.array(pe)


def pooled_chisquare(observed, expected, min_expected: float = 5.0, ddof: int = 0
                     ) -> TestResult:
    """Pearson chi-square after pooling sparse bins; expected is rescaled to the observed total."""
    o, e = pool_bins(observed, expected, min_expected)
    if o.size < 2:
        raise DomainError("need at least two bins after pooling")
    e = e * o.sum() / e.sum()
    r = stats.chisquare(o, e, ddof=ddof)
    return TestResult(float(r.statistic), float(r.pvalue))
