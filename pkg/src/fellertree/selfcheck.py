"""Identity and normalization suites, runnable from the command line."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, Dict, List

import numpy as np

from . import densities as D
from . import kernel as K
from .quadrature import integrate_1d, integrate_2d

IDENTITY_TOL = 1e-11
DERIVATIVE_TOL = 1e-6
CRITICAL_TOL = 1e-8
SUM_TOL = 1e-10
QUAD_TOL = 1e-6


@dataclass
class CheckResult:
    name: str
    worst: float
    tol: float
    count: int

    @property
    def passed(self) -> bool:
        return bool(self.worst < self.tol)

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag}  {self.name:<44s} worst={self.worst:.3e}  tol={self.tol:.0e}  n={self.count}"


def _rel(a, b):
    a, b = float(a), float(b)
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def _rel_scaled(a, b, scale):
    """Error relative to the size of the terms that were combined."""
    return abs(float(a) - float(b)) / max(abs(float(scale)), 1e-300)


def _draws(rng, n):
    alpha = rng.uniform(-3.0, 3.0, n)
    t = rng.uniform(0.1, 5.0, n)
    s = t * rng.uniform(0.02, 0.98, n)
    return alpha, t, s


def identity_suite(draws: int = 200, seed: int = 0) -> List[CheckResult]:
    rng = np.random.default_rng(seed)
    alpha, t, s = _draws(rng, draws)
    worst: Dict[str, float] = {}

    def rec(name, err):
        worst[name] = max(worst.get(name, 0.0), err)

    for a, tt, ss in zip(alpha, t, s):
        mu_t, b_t = K.mu(tt, a), K.beta(tt, a)
        ib = lambda u: K.inv_beta(u, a)  # noqa: E731
        rec("mu beta = exp(alpha t)", _rel(mu_t * b_t, math.exp(a * tt)))
        rec("mu - 1/beta = 2 alpha",
            _rel_scaled(mu_t - 1.0 / b_t, 2.0 * a, max(mu_t, 1.0 / b_t)))
        rec("eta(s,t) eta(t-s,t) = mu/beta",
            _rel(K.eta(ss, tt, a) * K.eta(tt - ss, tt, a), mu_t / b_t))
        rec("U(t,s) = U(t,t-s)", _rel(K.capital_u(tt, ss, a), K.capital_u(tt, tt - ss, a)))
        u = K.capital_u(tt, ss, a)
        rec("(mu/beta)(s) / U = eta(s,t)",
            _rel(K.mu(ss, a) / K.beta(ss, a) / u, K.eta(ss, tt, a)))
        rec("(mu/beta)(s) U^-2 (mu/beta)(t-s) = mu/beta",
            _rel(K.mu(ss, a) / K.beta(ss, a) / u ** 2 * K.mu(tt - ss, a) / K.beta(tt - ss, a),
                 mu_t / b_t))
        rec("mu(t;a) beta(t;-a) = 1", _rel(mu_t * K.beta(tt, -a), 1.0))
        rec("mu/beta even in alpha", _rel(mu_t / b_t, K.mu(tt, -a) / K.beta(tt, -a)))
        rec("eta(s,t) even in alpha", _rel(K.eta(ss, tt, a), K.eta(ss, tt, -a)))
        rec("U(t,s;a) = U(t,s;|a|)", _rel(u, K.capital_u(tt, ss, abs(a))))
        h = 1e-5 * tt
        fd = (ib(tt + h) - ib(tt - h)) / (2 * h)
        worst["d(1/beta)/dt = -mu/(2 beta)"] = max(
            worst.get("d(1/beta)/dt = -mu/(2 beta)", 0.0), _rel(fd, -0.5 * mu_t / b_t))

    crit = 0.0
    for tt in (0.1, 1.0, 10.0):
        crit = max(crit, abs(K.mu(tt, 1e-10) - 2.0 / tt), abs(K.beta(tt, 1e-10) - tt / 2.0))
    out = [CheckResult(k, v, IDENTITY_TOL, draws) for k, v in worst.items()
           if not k.startswith("d(")]
    out.append(CheckResult("d(1/beta)/dt = -mu/(2 beta)",
                           worst["d(1/beta)/dt = -mu/(2 beta)"], DERIVATIVE_TOL, draws))
    out.append(CheckResult("continuity at alpha = 0", crit, CRITICAL_TOL, 3))
    return out


# ---------------------------------------------------------------------------
# normalization


def _quad_inf(f, peak: float) -> float:
    """Integral over (0, inf), split at a scale hint for the bulk of the mass."""
    return integrate_1d(f, 0.0, peak) + integrate_1d(f, peak, math.inf)


def _normalization_cases(rng) -> Dict[str, Callable[[], float]]:
    a = float(rng.choice([-1.0, 1.0]) * rng.uniform(0.05, 2.0))
    t = float(rng.uniform(0.3, 3.0))
    s = float(t * rng.uniform(0.1, 0.9))
    x = float(rng.uniform(0.2, 5.0))
    x0 = float(rng.uniform(0.2, 3.0))
    n = int(rng.integers(2, 9))
    k = int(rng.integers(2, 6))
    F = D.FixedT1(t)
    inf1, unif1 = D.InfT1(), D.UnifT1()
    b_t = K.beta(t, a)
    kmax = 5000

    def pmf_sum(f, lo=1):
        ks = np.arange(lo, kmax)
        return float(np.sum(f(ks)))

    def trans():
        f = lambda v: D.transition_density(x0, v, t, a).density  # noqa: E731
        atom = D.transition_density(x0, 1.0, t, a).atom
        return _quad_inf(f, x0 * K.mu(t, a) * b_t + b_t) + atom

    def cpe():
        xi = x0 * K.mu(t, a)
        f = lambda v: D.cpe_density(v, xi).density  # noqa: E731
        return _quad_inf(f, xi + 1.0) + D.cpe_density(1.0, xi).atom

    def mrca(regime, upper):
        return integrate_2d(lambda ss, z: D.mrca_joint_density(ss, z, x, regime, a),
                            0.0, upper, 0.0, math.inf)

    def joint3(f, upper):
        # (s2, s3 = u s2) maps the ordered region onto a rectangle
        def g(s2, u):
            return f(np.stack([s2, u * s2], axis=-1)) * s2
        return integrate_2d(g, 0.0, upper, 0.0, 1.0)

    def open_time(f):
        return _quad_inf(f, float(np.clip(2 * x, 1e-3, 50)))

    return {
        "ancestors_pmf fixed-t1": lambda: pmf_sum(lambda ks: D.ancestors_pmf(ks, s, x, F, a)),
        "ancestors_pmf inf-t1": lambda: pmf_sum(lambda ks: D.ancestors_pmf(ks, s, x, inf1, a)),
        "ancestors_pmf unif-t1": lambda: pmf_sum(
            lambda ks: D.ancestors_pmf(ks, s, x, unif1, a), lo=0),
        "ancestors_pmf unif-x0": lambda: pmf_sum(
            lambda ks: D.ancestors_pmf(ks, t, x, D.UnifX0(t), a)),
        "ancestors_pmf_unconditioned_x": lambda: pmf_sum(
            lambda ks: D.ancestors_pmf_unconditioned_x(ks, s, F, a), ) + float(
            (1 - K.beta(s, a) / b_t) ** (kmax - 1)),
        "sample_ancestors_pmf fixed-t1": lambda: pmf_sum(
            lambda ks: D.sample_ancestors_pmf(ks[ks <= n], n, s, x, F, a)),
        "sample_ancestors_pmf inf-t1": lambda: pmf_sum(
            lambda ks: D.sample_ancestors_pmf(ks[ks <= n], n, s, x, inf1, a)),
        "sample_ancestors_pmf_unconditioned_x": lambda: pmf_sum(
            lambda ks: D.sample_ancestors_pmf_unconditioned_x(ks[ks <= n], n, s, F, a)),
        "ancestors_pmf_both_endpoints": lambda: pmf_sum(
            lambda ks: D.ancestors_pmf_both_endpoints(ks, x0, x, t, a)),
        "sample_ancestors_pmf_both_endpoints": lambda: pmf_sum(
            lambda ks: D.sample_ancestors_pmf_both_endpoints(ks[ks <= n], n, x0, x, t, a)),
        "transition_density + atom": trans,
        "cpe_density + atom": cpe,
        "final_pop_density": lambda: _quad_inf(lambda v: D.final_pop_density(v, F, a), b_t),
        "coalescent_time_marginal fixed-t1": lambda: integrate_1d(
            lambda u: D.coalescent_time_marginal(k, u, x, F, a), 0.0, t),
        "coalescent_time_marginal inf-t1": lambda: open_time(
            lambda u: D.coalescent_time_marginal(k, u, x, inf1, a)),
        "coalescent_time_marginal unif-t1": lambda: open_time(
            lambda u: D.coalescent_time_marginal(k, u, x, unif1, a)),
        "coalescent_time_joint fixed-t1 k=3": lambda: joint3(
            lambda v: D.coalescent_time_joint(v, x, F, a), t),
        "coalescent_time_joint inf-t1 k=3": lambda: joint3(
            lambda v: D.coalescent_time_joint(v, x, inf1, a), math.inf),
        "coalescent_time_joint unif-t1 k=2": lambda: joint3(
            lambda v: D.coalescent_time_joint(v, x, unif1, a), math.inf),
        "coalescent_time_joint_unconditioned_x k=3": lambda: joint3(
            lambda v: D.coalescent_time_joint_unconditioned_x(v, F, a), t),
        "coalescent_time_marginal_unconditioned_x": lambda: integrate_1d(
            lambda u: D.coalescent_time_marginal_unconditioned_x(k, u, F, a), 0.0, t),
        "past_pop_density fixed-t1": lambda: _quad_inf(
            lambda z: D.past_pop_density(z, s, x, F, a), x + 1.0),
        "past_pop_density inf-t1": lambda: _quad_inf(
            lambda z: D.past_pop_density(z, s, x, inf1, a), x + 1.0),
        "posterior_t1_density": lambda: open_time(lambda u: D.posterior_t1_density(u, x, a)),
        "posterior_x0_density": lambda: _quad_inf(
            lambda v: D.posterior_x0_density(v, x, t, a), x + 1.0),
        "posterior_x0_density_exp_prior": lambda: _quad_inf(
            lambda v: D.posterior_x0_density_exp_prior(v, x, t, a, 0.5), x + 1.0),
        "mrca_joint_density fixed-t1": lambda: mrca(F, t),
        "mrca_joint_density inf-t1": lambda: mrca(inf1, math.inf),
        "mrca_joint_density unif-t1": lambda: mrca(unif1, math.inf),
        "largex_marginal": lambda: integrate_1d(
            lambda u: D.largex_marginal(k, u, abs(a)), -math.inf, math.inf),
        "largex_joint k=3": lambda: integrate_2d(
            lambda u, v: D.largex_joint(np.stack([u, u - v], axis=-1), abs(a)),
            -math.inf, math.inf, 0.0, math.inf),
        "largex_mrca_joint": lambda: integrate_2d(
            lambda u, z: D.largex_mrca_joint(u, z, abs(a)), -math.inf, math.inf, 0.0, math.inf),
    }



def normalization_suite(draws: int = 20, seed: int = 1) -> List[CheckResult]:
    rng = np.random.default_rng(seed)
    worst: Dict[str, float] = {}
    for _ in range(draws):
        for name, fn in _normalization_cases(rng).items():
            err = abs(fn() - 1.0)
            worst[name] = max(worst.get(name, 0.0), err)
    return [CheckResult(name, v, SUM_TOL if "pmf" in name else QUAD_TOL, draws)
            for name, v in worst.items()]


def run_all(identity_draws: int = 200, norm_draws: int = 20, seed: int = 0):
    """Both suites, with their wall-clock times in seconds."""
    t0 = time.perf_counter()
    ident = identity_suite(identity_draws, seed)
    t1 = time.perf_counter()
    norm = normalization_suite(norm_draws, seed + 1)
    t2 = time.perf_counter()
    return ident, norm, (t1 - t0, t2 - t1)
