import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fellertree import DomainError
from fellertree.special import (digamma, log_bessel_i, log_gamma, log_gauss_2f1,
                                log_kummer_1f1)

mpmath.mp.dps = 50


def mp_series_bessel(nu, z, terms=200):
    z = mpmath.mpf(z)
    return mpmath.fsum((z / 2) ** (2 * k + nu) / (mpmath.factorial(k) * mpmath.factorial(k + nu))
                       for k in range(terms))


def mp_series(coef, z, terms):
    return mpmath.fsum(coef(k) * mpmath.mpf(z) ** k for k in range(terms))


# Bessel


def test_bessel_small_argument():
    assert abs(log_bessel_i(1, 1e-8) - math.log(0.5e-8)) < 1e-15


def test_bessel_large_order_ratio():
    # the ratio I_m(2w) m! / w^m is 1 + O(1/m), not 1 at finite m
    w = 2.0
    for m in (60, 600, 6000):
        log_ratio = log_bessel_i(m, 2 * w) + math.lgamma(m + 1) - m * math.log(w)
        ref = mpmath.log(mp_series_bessel(m, 2 * w, 60) * mpmath.factorial(m) / mpmath.mpf(w) ** m)
        assert log_ratio == pytest.approx(float(ref), abs=1e-11)
        assert abs(log_ratio - w * w / (m + 1)) < 2 * w ** 4 / (m + 1) ** 2


def test_bessel_i1_series_oracle():
    ref = mpmath.log(mp_series_bessel(1, 2.0))
    assert log_bessel_i(1, 2.0) == pytest.approx(float(ref), rel=1e-14)


@pytest.mark.parametrize("nu", [0, 1, 2, 5, 20, 80])
@pytest.mark.parametrize("z", [1e-8, 1e-3, 0.5, 7.0, 29.9, 30.1, 120.0, 1e3, 1e4])
def test_bessel_against_mpmath(nu, z):
    ref = float(mpmath.log(mpmath.besseli(nu, z)))
    assert log_bessel_i(nu, z) == pytest.approx(ref, rel=1e-12, abs=1e-12)


def test_bessel_zero_argument():
    assert log_bessel_i(0, 0.0) == 0.0
    assert log_bessel_i(1, 0.0) == -math.inf


# Kummer 1F1


def test_kummer_zero_argument():
    assert log_kummer_1f1(3.0, 5.0, 0.0) == 0.0


def test_kummer_collapse():
    assert math.exp(log_kummer_1f1(2.0, 2.0, 3.5)) == pytest.approx(math.exp(3.5), rel=1e-12)


def test_kummer_series_oracle():
    def coef(k):
        return mpmath.rf(3, k) / (mpmath.rf(7, k) * mpmath.factorial(k))
    ref = mpmath.log(mp_series(coef, 10, 2000))
    assert log_kummer_1f1(3.0, 7.0, 10.0) == pytest.approx(float(ref), rel=1e-13)


@pytest.mark.parametrize("a,b", [(2.0, 3.0), (3.0, 7.0), (6.0, 13.0), (11.0, 30.0)])
@pytest.mark.parametrize("z", [0.01, 1.0, 25.0, 59.0, 61.0, 300.0, 1e3])
def test_kummer_against_mpmath(a, b, z):
    ref = float(mpmath.log(mpmath.hyp1f1(a, b, z)))
    assert log_kummer_1f1(a, b, z) == pytest.approx(ref, rel=1e-10)


def test_kummer_domain():
    with pytest.raises(DomainError):
        log_kummer_1f1(-1.0, 2.0, 1.0)
    with pytest.raises(DomainError):
        log_kummer_1f1(1.0, 2.0, -1.0)


# Gauss 2F1


def test_gauss_zero_argument():
    for n in (2, 5, 10):
        assert log_gauss_2f1(2.0, 1.0, n + 1.0, 0.0) == 0.0


def test_gauss_n2_closed_form():
    z = 0.3
    lhs = z * math.exp(log_gauss_2f1(2.0, 1.0, 3.0, 1 - z))
    rhs = -2 * z / (1 - z) - 2 * z / (1 - z) ** 2 * math.log(z)
    assert lhs == pytest.approx(rhs, rel=1e-10)


def test_gauss_series_oracle():
    def coef(k):
        return mpmath.rf(2, k) * mpmath.rf(1, k) / (mpmath.rf(5, k) * mpmath.factorial(k))
    ref = mpmath.log(mp_series(coef, 0.9, 3000))
    assert log_gauss_2f1(2.0, 1.0, 5.0, 0.9) == pytest.approx(float(ref), rel=1e-12)


@pytest.mark.parametrize("c", [3.0, 4.0, 7.0, 41.0])
@pytest.mark.parametrize("z", [0.1, 0.5, 0.89, 0.91, 0.99, 0.999, 0.999999])
def test_gauss_against_mpmath(c, z):
    ref = float(mpmath.log(mpmath.hyp2f1(2, 1, c, z)))
    assert log_gauss_2f1(2.0, 1.0, c, z) == pytest.approx(ref, rel=1e-10)


def test_gauss_domain():
    with pytest.raises(DomainError):
        log_gauss_2f1(2.0, 1.0, 3.0, 1.0)


# gamma helpers


def test_log_gamma_and_digamma():
    assert log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-15)
    assert np.allclose(log_gamma(np.array([1.0, 2.0, 3.0])), [0.0, 0.0, math.log(2.0)])
    assert digamma(1.0) == pytest.approx(-0.5772156649015329, rel=1e-13)


@given(st.integers(0, 40), st.floats(1e-6, 200.0))
def test_bessel_property(nu, z):
    ref = float(mpmath.log(mpmath.besseli(nu, z)))
    assert log_bessel_i(nu, z) == pytest.approx(ref, rel=1e-11, abs=1e-11)


@given(st.integers(1, 30), st.floats(0.0, 0.999))
def test_gauss_property(n, z):
    ref = float(mpmath.log(mpmath.hyp2f1(2, 1, n + 1, z)))
    assert log_gauss_2f1(2.0, 1.0, n + 1.0, z) == pytest.approx(ref, rel=1e-10, abs=1e-14)
