"""
Log-space special functions: modified Bessel I of integer order, Kummer's
1F1 and Gauss' 2F1, plus log-gamma and digamma helpers.

All series are summed with Neumaier compensation and periodic rescaling so
that the partial sum never overflows; the logarithm of the scale is carried
separately.  A series that has not met its tolerance after ``MAX_TERMS``
terms raises :class:`ConvergenceError`.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import ConvergenceError, DomainError

MAX_TERMS = 10_000
REL_TOL = 1e-16
BESSEL_ASYMPTOTIC_Z = 30.0
KUMMER_ASYMPTOTIC_Z = 60.0
GAUSS_SERIES_Z = 0.9

_RESCALE = 1e200


class _Accumulator:
    """Compensated sum of positive or mixed terms held as ``exp(log_scale) * sum``."""

    __slots__ = ("total", "comp", "log_scale")

    def __init__(self, log_scale=0.0):
        self.total = 0.0
        self.comp = 0.0
        self.log_scale = log_scale

    def add(self, term):
        t = self.total + term
        if abs(self.total) >= abs(term):
            self.comp += (self.total - t) + term
        else:
            self.comp += (term - t) + self.total
        self.total = t

    @property
    def value(self):
        return self.total + self.comp

    def rescale(self):
        """Divide the running sum by itself; returns the factor for live terms."""
        v = abs(self.value)
        if v < _RESCALE:
            return 1.0
        self.log_scale += math.log(v)
        self.total /= v
        self.comp /= v
        return 1.0 / v


def _vectorized(fn):
    vec = np.vectorize(fn, otypes=[float])

    def wrapper(*args):
        if all(np.ndim(a) == 0 for a in args):
            return fn(*args)
        return vec(*args)

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    wrapper.scalar = fn
    return wrapper


def _log_gamma_scalar(x):
    return math.lgamma(x)


log_gamma = _vectorized(_log_gamma_scalar)
log_gamma.__doc__ = "log|Gamma(x)| (stdlib lgamma, broadcast over arrays)."


def _gamma_sign(x):
    if x > 0 or x != math.floor(x) and math.floor(x) % 2 == 0:
        return 1.0
    if x == math.floor(x):
        raise DomainError(f"Gamma has a pole at {x}")
    return -1.0


def digamma(x):
    """Digamma function for real ``x`` away from the nonpositive integers."""
    x = float(x)
    if x <= 0 and x == math.floor(x):
        raise DomainError(f"digamma has a pole at {x}")
    if x < 0:
        # reflection
        return digamma(1.0 - x) - math.pi / math.tan(math.pi * x)
    acc = 0.0
    while x < 10.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    tail = inv2 * (1 / 12 - inv2 * (1 / 120 - inv2 * (1 / 252 - inv2 * (
        1 / 240 - inv2 * (1 / 132 - inv2 * (691 / 32760 - inv2 / 12))))))
    return acc + math.log(x) - 0.5 / x - tail


# ---------------------------------------------------------------------------
# Bessel I


def _log_bessel_series(nu, z):
    h = math.log(z / 2.0)
    q = 0.25 * z * z
    acc = _Accumulator(nu * h - math.lgamma(nu + 1.0))
    term = 1.0
    acc.add(term)
    for k in range(MAX_TERMS):
        r = q / ((k + 1.0) * (k + 1.0 + nu))
        term *= r
        acc.add(term)
        if r < 1.0 and term * r / (1.0 - r) < REL_TOL * acc.value:
            return acc.log_scale + math.log(acc.value)
        term *= acc.rescale()
    raise ConvergenceError(f"Bessel series for nu={nu}, z={z} did not converge")


def _log_bessel_hankel(nu, z):
    """Large-z expansion; returns None when it diverges before converging."""
    mu4 = 4.0 * nu * nu
    total = 1.0
    term = 1.0
    prev = math.inf
    for k in range(1, 200):
        term *= -(mu4 - (2 * k - 1) ** 2) / (k * 8.0 * z)
        if term == 0.0:
            break
        if abs(term) >= prev:
            return None
        total += term
        prev = abs(term)
        if prev < REL_TOL * abs(total):
            break
    else:
        return None
    if total <= 0:
        return None
    return z - 0.5 * math.log(2.0 * math.pi * z) + math.log(total)


def _log_bessel_i_scalar(nu, z):
    nu_f = float(nu)
    z = float(z)
    if nu_f < 0 or nu_f != math.floor(nu_f):
        raise DomainError(f"order must be a nonnegative integer, got {nu}")
    if not z >= 0:
        raise DomainError(f"argument must be nonnegative, got {z}")
    if math.isinf(z):
        return math.inf
    if z == 0.0:
        return 0.0 if nu_f == 0 else -math.inf
    if z >= BESSEL_ASYMPTOTIC_Z:
        out = _log_bessel_hankel(nu_f, z)
        if out is not None:
            return out
    return _log_bessel_series(nu_f, z)


log_bessel_i = _vectorized(_log_bessel_i_scalar)
log_bessel_i.__doc__ = """log I_nu(z) for integer nu >= 0 and z >= 0.

Ascending series below z = 30; the Hankel expansion above, falling back to
the series when that expansion cannot reach full precision (large orders).
"""


# ---------------------------------------------------------------------------
# Kummer 1F1


def _log_kummer_series(a, b, z):
    acc = _Accumulator()
    term = 1.0
    acc.add(term)
    for k in range(MAX_TERMS):
        r = (a + k) / (b + k) * z / (k + 1.0)
        term *= r
        acc.add(term)
        # once past the peak the ratio keeps falling, so the tail is geometric
        if r < 1.0 and term * r / (1.0 - r) < REL_TOL * acc.value:
            return acc.log_scale + math.log(acc.value)
        term *= acc.rescale()
    raise ConvergenceError(f"1F1({a}; {b}; {z}) series did not converge")


def _log_kummer_asymptotic(a, b, z):
    total = 1.0
    term = 1.0
    prev = math.inf
    for s in range(200):
        term *= (b - a + s) * (1.0 - a + s) / ((s + 1.0) * z)
        if term == 0.0:
            break
        if abs(term) >= prev:
            return None
        total += term
        prev = abs(term)
        if prev < REL_TOL * abs(total):
            break
    else:
        return None
    if total <= 0:
        return None
    return (math.lgamma(b) - math.lgamma(a) + z + (a - b) * math.log(z)
            + math.log(total))


def _log_kummer_scalar(a, b, z):
    a, b, z = float(a), float(b), float(z)
    if not (a > 0 and b > 0):
        raise DomainError(f"need a, b > 0, got a={a}, b={b}")
    if not z >= 0:
        raise DomainError(f"need z >= 0, got {z}")
    if z == 0.0:
        return 0.0
    if a == b:
        return z
    if z >= KUMMER_ASYMPTOTIC_Z and z > 4.0 * b:
        out = _log_kummer_asymptotic(a, b, z)
        if out is not None:
            return out
    return _log_kummer_series(a, b, z)


log_kummer_1f1 = _vectorized(_log_kummer_scalar)
log_kummer_1f1.__doc__ = """log 1F1(a; b; z) for a, b > 0 and z >= 0."""


# ---------------------------------------------------------------------------
# Gauss 2F1


def _signed_log_sum(parts):
    """Log of ``sum(sign * exp(logmag))``; raises if the total is not positive."""
    parts = [(lm, sg) for lm, sg in parts if sg != 0 and lm != -math.inf]
    if not parts:
        raise DomainError("hypergeometric value is zero")
    top = max(lm for lm, _ in parts)
    total = math.fsum(sg * math.exp(lm - top) for lm, sg in parts)
    if total <= 0:
        raise DomainError("hypergeometric value is not positive; log undefined")
    return top + math.log(total)


def _gauss_series(a, b, c, z):
    """Signed (log|F|, sign) of the direct series, assumed convergent."""
    acc = _Accumulator()
    term = 1.0
    acc.add(term)
    for k in range(MAX_TERMS):
        num = (a + k) * (b + k)
        if num == 0.0:
            break
        r = num / ((c + k) * (k + 1.0)) * z
        term *= r
        acc.add(term)
        ar = abs(r)
        if ar < 1.0 and abs(term) * ar / (1.0 - ar) < REL_TOL * abs(acc.value):
            break
        term *= acc.rescale()
    else:
        raise ConvergenceError(f"2F1({a},{b};{c};{z}) series did not converge")
    v = acc.value
    if v == 0.0:
        return -math.inf, 0.0
    return acc.log_scale + math.log(abs(v)), math.copysign(1.0, v)


def _is_nonpos_int(v):
    return v <= 0 and v == math.floor(v)


def _lgamma_signed(x):
    return math.lgamma(x), _gamma_sign(x)


def _gauss_near_one_generic(a, b, c, z):
    """Non-integer ``c - a - b``: two-term connection formula in ``1 - z``."""
    w = 1.0 - z
    m = c - a - b
    parts = []
    lg = [_lgamma_signed(v) for v in (c, m, c - a, c - b)]
    s1, sg1 = _gauss_series(a, b, 1.0 - m, w)
    parts.append((lg[0][0] + lg[1][0] - lg[2][0] - lg[3][0] + s1,
                  lg[0][1] * lg[1][1] * lg[2][1] * lg[3][1] * sg1))
    lg2 = [_lgamma_signed(v) for v in (c, -m, a, b)]
    s2, sg2 = _gauss_series(c - a, c - b, m + 1.0, w)
    parts.append((m * math.log(w) + lg2[0][0] + lg2[1][0] - lg2[2][0]
                  - lg2[3][0] + s2,
                  lg2[0][1] * lg2[1][1] * lg2[2][1] * lg2[3][1] * sg2))
    return _signed_log_sum(parts)


def _gauss_near_one_integer(a, b, m, z):
    """``c = a + b + m`` with integer ``m >= 0`` and ``a, b > 0``."""
    w = 1.0 - z
    lw = math.log(w)
    lg_c = math.lgamma(a + b + m)
    parts = []
    if m > 0:
        # finite part
        pref = math.lgamma(m) + lg_c - math.lgamma(a + m) - math.lgamma(b + m)
        term = 1.0
        vals = [term]
        for n in range(m - 1):
            term *= (a + n) * (b + n) / ((n + 1.0) * (1.0 - m + n)) * w
            vals.append(term)
        fin = math.fsum(vals)
        if fin != 0.0:
            parts.append((pref + math.log(abs(fin)), math.copysign(1.0, fin)))
    # logarithmic part: - (z-1)^m Gamma(c)/(Gamma(a)Gamma(b)) * sum
    pref = lg_c - math.lgamma(a) - math.lgamma(b) + m * lw
    sign = -((-1.0) ** m)
    acc = 0.0
    comp = []
    log_coef = -math.lgamma(m + 1.0)
    for n in range(MAX_TERMS):
        if n > 0:
            log_coef += (math.log(a + m + n - 1) + math.log(b + m + n - 1)
                         - math.log(n) - math.log(n + m) + lw)
        bracket = (lw - digamma(n + 1) - digamma(n + m + 1)
                   + digamma(a + n + m) + digamma(b + n + m))
        t = math.exp(log_coef) * bracket
        comp.append(t)
        acc = math.fsum(comp)
        if n > 2 and abs(t) < REL_TOL * abs(acc) and w < 0.5:
            break
    else:
        raise ConvergenceError("2F1 logarithmic connection series did not converge")
    if acc != 0.0:
        parts.append((pref + math.log(abs(acc)), sign * math.copysign(1.0, acc)))
    return _signed_log_sum(parts)


def _log_gauss_scalar(a, b, c, z):
    a, b, c, z = float(a), float(b), float(c), float(z)
    if not c > 0:
        raise DomainError(f"need c > 0, got {c}")
    if not (0.0 <= z < 1.0):
        raise DomainError(f"need 0 <= z < 1, got {z}")
    if z == 0.0:
        return 0.0
    if z <= GAUSS_SERIES_Z or _is_nonpos_int(a) or _is_nonpos_int(b):
        lv, sg = _gauss_series(a, b, c, z)
        if sg <= 0:
            raise DomainError("hypergeometric value is not positive; log undefined")
        return lv
    m = c - a - b
    mi = round(m)
    if abs(m - mi) > 1e-9:
        return _gauss_near_one_generic(a, b, c, z)
    mi = int(mi)
    if mi > 30:
        # coefficients decay polynomially fast enough for direct summation
        lv, sg = _gauss_series(a, b, c, z)
        return lv
    if mi < 0:
        # Euler: F(a,b;c;z) = (1-z)^(c-a-b) F(c-a, c-b; c; z)
        a2, b2 = c - a, c - b
        if _is_nonpos_int(a2) or _is_nonpos_int(b2):
            lv, sg = _gauss_series(a2, b2, c, z)
            if sg <= 0:
                raise DomainError("hypergeometric value is not positive")
            return m * math.log1p(-z) + lv
        return m * math.log1p(-z) + _gauss_near_one_integer(a2, b2, -mi, z)
    if a <= 0 or b <= 0:
        raise DomainError(
            f"2F1({a},{b};{c};z) near z = 1 is not supported for a, b <= 0")
    return _gauss_near_one_integer(a, b, mi, z)


log_gauss_2f1 = _vectorized(_log_gauss_scalar)
log_gauss_2f1.__doc__ = """log 2F1(a, b; c; z) for c > 0 and 0 <= z < 1.

Direct series up to z = 0.9; above that the connection formulas in 1 - z,
including the logarithmic case when c - a - b is an integer.
"""
