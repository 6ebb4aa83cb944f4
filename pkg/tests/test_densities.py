import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate, stats

from fellertree import DomainError
from fellertree import densities as D
from fellertree import kernel as K

INF1, UNIF1 = D.InfT1(), D.UnifT1()


def quad(f, a, b, **kw):
    kw.setdefault("epsabs", 1e-13)
    kw.setdefault("epsrel", 1e-12)
    kw.setdefault("limit", 500)
    return integrate.quad(f, a, b, **kw)[0]


def quad_inf(f, split):
    return quad(f, 0, split) + quad(f, split, np.inf)


def random_draws(seed, n):
    rng = np.random.default_rng(seed)
    for _ in range(n):
        a = float(rng.choice([-1, 1]) * rng.uniform(0.05, 2.5))
        t = float(rng.uniform(0.3, 4.0))
        s = float(t * rng.uniform(0.05, 0.95))
        x = float(rng.uniform(0.1, 5.0))
        yield a, t, s, x


# ---------------------------------------------------------------------------
# transition density


def test_transition_atom():
    t = 2.0 / 0.7  # mu(t; 0) = 0.7
    assert K.mu(t, 0.0) == pytest.approx(0.7)
    assert D.transition_density(1.0, 1.0, t, 0.0).atom == pytest.approx(math.exp(-0.7), rel=1e-14)


def test_transition_normalization():
    x0, t, a = 0.8, 1.2, 0.5
    f = lambda v: D.transition_density(x0, v, t, a).density  # noqa: E731
    total = quad_inf(f, 5.0) + D.transition_density(x0, 1.0, t, a).atom
    assert total == pytest.approx(1.0, abs=1e-8)


def test_transition_bessel_vs_series():
    x0, x, t, a = 1.0, 2.0, 1.0, 1.0
    series = sum(D.transition_density_component(l, x0, x, t, a) for l in range(1, 51))
    assert D.transition_density(x0, x, t, a).density == pytest.approx(series, rel=1e-10)


def test_component_l1():
    x0, x, t = 1.0, 1.0, 1.0
    mu, b = K.mu(t, 0.0), K.beta(t, 0.0)
    expected = x0 * (mu / b) * math.exp(-x0 * mu) * math.exp(-x / b)
    assert D.transition_density_component(1, x0, x, t, 0.0) == pytest.approx(expected, rel=1e-14)


def test_component_sum_200():
    x0, x, t, a = 0.5, 0.5, 1.0, -1.0
    series = sum(D.transition_density_component(l, x0, x, t, a) for l in range(1, 201))
    assert D.transition_density(x0, x, t, a).density == pytest.approx(series, rel=1e-12)


def test_component_decay():
    v = D.log_transition_density_component(150, 1.0, 1.0, 1.0, 0.0)
    assert np.isfinite(v) and v < math.log(1e-200)
    vals = [D.log_transition_density_component(l, 1.0, 1.0, 1.0, 0.0) for l in range(3, 150)]
    assert np.all(np.diff(vals) < 0)


def test_transition_series_oracle_mpmath():
    # Poisson-gamma mixture summed in extended precision
    x0, x, t, a = 1.3, 0.4, 0.7, -0.6
    mu = mpmath.mpf(K.mu(t, a))
    b = mpmath.mpf(K.beta(t, a))
    lam = x0 * mu
    ref = mpmath.nsum(lambda l: mpmath.exp(-lam) * lam ** l / mpmath.factorial(l)
                      * x ** (l - 1) * mpmath.exp(-x / b) / (b ** l * mpmath.factorial(l - 1)),
                      [1, mpmath.inf])
    assert D.transition_density(x0, x, t, a).density == pytest.approx(float(ref), rel=1e-12)
    assert D.transition_density_series(x0, x, t, a) == pytest.approx(float(ref), rel=1e-12)


def test_transition_domain():
    with pytest.raises(DomainError):
        D.transition_density(1.0, 1.0, 0.0, 1.0)
    with pytest.raises(DomainError):
        D.transition_density(-1.0, 1.0, 1.0, 1.0)


def test_transition_cdf():
    x0, t, a = 0.8, 1.2, 0.5
    f = lambda v: D.transition_density(x0, v, t, a).density  # noqa: E731
    atom = D.transition_density(x0, 1.0, t, a).atom
    assert D.transition_cdf(x0, 1.5, t, a) == pytest.approx(atom + quad(f, 0, 1.5), abs=1e-12)


# ---------------------------------------------------------------------------
# compound Poisson exponential


def test_cpe_atom():
    assert D.cpe_density(1.0, 2.0).atom == pytest.approx(math.exp(-2.0), rel=1e-15)


def test_cpe_rescaling():
    x0, x, t, a = 1.0, 2.0, 1.0, 0.3
    mu, b = K.mu(t, a), K.beta(t, a)
    c = x0 * mu * b
    lhs = D.transition_density(x0, x, t, a).density
    assert lhs == pytest.approx(D.cpe_density(x / c, x0 * mu).density / c, rel=1e-12)


def test_cpe_normalization():
    xi = 0.7
    total = quad_inf(lambda z: D.cpe_density(z, xi).density, 3.0) + math.exp(-xi)
    assert total == pytest.approx(1.0, abs=1e-8)


# ---------------------------------------------------------------------------
# final population


def test_final_pop_mean():
    F = D.FixedT1(1.0)
    mean = quad_inf(lambda v: v * D.final_pop_density(v, F, 0.0), 1.0)
    assert mean == pytest.approx(0.5, rel=1e-10)


def test_final_pop_normalization():
    F = D.FixedT1(1.3)
    assert quad_inf(lambda v: D.final_pop_density(v, F, -0.7), 1.0) == pytest.approx(1.0, abs=1e-10)


def test_final_pop_plain_alpha():
    # exposed at the given alpha: mean beta(t; alpha), which differs between signs
    F = D.FixedT1(1.0)
    assert D.final_pop_density(0.3, F, 1.0) != D.final_pop_density(0.3, F, -1.0)
    assert D.final_pop_cdf(1.0, F, 1.0) == pytest.approx(-math.expm1(-1 / K.beta(1.0, 1.0)))


def test_final_pop_regime_checked():
    with pytest.raises(DomainError):
        D.final_pop_density(1.0, INF1, 1.0)


# ---------------------------------------------------------------------------
# ancestors


def test_fixed_t1_at_horizon():
    F = D.FixedT1(1.0)
    assert D.ancestors_pmf(1, 1.0, 3.0, F, 1.0) == 1.0
    assert D.ancestors_pmf(2, 1.0, 3.0, F, 1.0) == 0.0


@pytest.mark.parametrize("a", [1.0, -1.0])
@pytest.mark.parametrize("regime", [D.FixedT1(1.0), INF1, UNIF1])
def test_ancestor_normalization(regime, a):
    ks = np.arange(0, 400)
    assert np.sum(D.ancestors_pmf(ks, 0.5, 3.0, regime, a)) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("a", [1.0, -1.0])
def test_unif_x0_normalization(a):
    ks = np.arange(0, 400)
    assert np.sum(D.ancestors_pmf(ks, 1.0, 3.0, D.UnifX0(1.0), a)) == pytest.approx(1.0, abs=1e-12)


def test_unif_x0_only_at_horizon():
    with pytest.raises(DomainError):
        D.ancestors_pmf(1, 0.5, 3.0, D.UnifX0(1.0), 1.0)


def test_ancestors_outside_support_is_zero():
    F = D.FixedT1(1.0)
    assert D.ancestors_pmf(0, 0.5, 3.0, F, 1.0) == 0.0
    assert D.ancestors_pmf(-2, 0.5, 3.0, INF1, 1.0) == 0.0
    assert D.ancestors_pmf(0, 0.5, 3.0, UNIF1, 1.0) > 0.0


def test_ancestors_invalid_s():
    with pytest.raises(DomainError):
        D.ancestors_pmf(1, 2.0, 3.0, D.FixedT1(1.0), 1.0)
    with pytest.raises(DomainError):
        D.ancestors_pmf(1, 0.0, 3.0, INF1, 1.0)


def test_ancestors_fixed_t1_sign_symmetry():
    ks = np.arange(1, 30)
    for a, t, s, x in random_draws(7, 100):
        F = D.FixedT1(t)
        assert np.array_equal(D.ancestors_pmf(ks, s, x, F, a), D.ancestors_pmf(ks, s, x, F, -a))


def test_ancestors_against_scipy_poisson():
    a, t, s, x = 0.8, 2.0, 0.6, 1.7
    rate = x * (1 / K.beta(s, a) - 1 / K.beta(t, a))
    ks = np.arange(1, 20)
    assert np.allclose(D.ancestors_pmf(ks, s, x, D.FixedT1(t), a),
                       stats.poisson.pmf(ks - 1, rate), rtol=1e-12, atol=0)


def test_unconditioned_at_horizon():
    assert D.ancestors_pmf_unconditioned_x(1, 1.0, D.FixedT1(1.0), 0.4) == 1.0


def test_unconditioned_mixture_identity():
    t, s, a = 1.0, 0.4, 1.0
    F = D.FixedT1(t)
    for k in (1, 2, 3, 6):
        mix = quad_inf(lambda x: D.ancestors_pmf(k, s, x, F, a) * D.final_pop_density(x, F, a), 1.0)
        assert D.ancestors_pmf_unconditioned_x(k, s, F, a) == pytest.approx(mix, abs=1e-8)


def test_unconditioned_geometric_tail():
    t, a = 3.0, 1.0
    s = K.beta_inv(0.01 * K.beta(t, a), a)
    F = D.FixedT1(t)
    ks = np.arange(1, 10_001)
    total = np.sum(D.ancestors_pmf_unconditioned_x(ks, s, F, a))
    assert total == pytest.approx(1 - 0.99 ** 10_000, abs=1e-12)


# ---------------------------------------------------------------------------
# coalescent times


def test_fixed_t1_k2_marginal_closed_form():
    a, t, s, x = 0.9, 1.5, 0.4, 2.0
    b = lambda u: K.beta(u, a)  # noqa: E731
    ref = x * K.mu(s, a) / (2 * b(s)) * math.exp(-(x / b(s) - x / b(t)))
    assert D.coalescent_time_marginal(2, s, x, D.FixedT1(t), a) == pytest.approx(ref, rel=1e-12)


def test_fixed_t1_marginal_normalization():
    F = D.FixedT1(1.0)
    total = quad(lambda u: D.coalescent_time_marginal(3, u, 2.0, F, 0.0), 0, 1.0)
    assert total == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("k", [1, 2, 3, 5])
def test_unif_t1_marginal_normalization(k):
    total = quad_inf(lambda u: D.coalescent_time_marginal(k, u, 1.3, UNIF1, -0.8), 2.0)
    assert total == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_cdf_matches_marginal(k):
    for regime in (D.FixedT1(2.0), INF1, UNIF1):
        s = 0.7
        via_quad = quad(lambda u: D.coalescent_time_marginal(k, u, 1.5, regime, 0.6), 0, s)
        assert D.coalescent_time_cdf(k, s, 1.5, regime, 0.6) == pytest.approx(via_quad, abs=1e-10)


def test_k_below_first_index_rejected():
    with pytest.raises(DomainError):
        D.coalescent_time_marginal(1, 0.5, 1.0, INF1, 1.0)
    with pytest.raises(DomainError):
        D.coalescent_time_marginal(0, 0.5, 1.0, UNIF1, 1.0)


def test_joint_k2_is_marginal():
    for regime in (D.FixedT1(2.0), INF1):
        j = D.coalescent_time_joint(np.array([0.8]), 1.5, regime, 0.6)
        assert j == D.coalescent_time_marginal(2, 0.8, 1.5, regime, 0.6)
    j = D.coalescent_time_joint(np.array([0.8]), 1.5, UNIF1, 0.6)
    assert j == D.coalescent_time_marginal(1, 0.8, 1.5, UNIF1, 0.6)


def test_joint_sign_symmetry():
    for a, t, s, x in random_draws(11, 50):
        times = np.array([s, 0.6 * s, 0.2 * s])
        F = D.FixedT1(t)
        assert D.coalescent_time_joint(times, x, F, a) == D.coalescent_time_joint(times, x, F, -a)


def test_joint_inner_integral():
    x, t, a = 1.0, 1.0, 1.0
    F = D.FixedT1(t)
    for s2 in (0.2, 0.5, 0.9):
        inner = quad(lambda s3: D.coalescent_time_joint(np.array([s2, s3]), x, F, a), 0, s2)
        # integrating T3 out leaves the T2 marginal
        assert inner == pytest.approx(D.coalescent_time_marginal(2, s2, x, F, a), rel=1e-6)
    for s3 in (0.1, 0.4):
        outer = quad(lambda s2: D.coalescent_time_joint(np.array([s2, s3]), x, F, a), s3, t)
        assert outer == pytest.approx(D.coalescent_time_marginal(3, s3, x, F, a), rel=1e-6)


def test_joint_rejects_unordered():
    with pytest.raises(DomainError):
        D.coalescent_time_joint(np.array([0.3, 0.5]), 1.0, INF1, 1.0)


def test_poisson_process_structure():
    # joint = prod of intensities times the void probability, intensity by finite differences
    for a, t, s, x in random_draws(3, 20):
        F = D.FixedT1(t)
        times = np.array([s, 0.7 * s, 0.3 * s])
        g = lambda u: x / K.beta(u, a) - x / K.beta(t, a)  # noqa: E731
        h = 1e-5
        lam = [-(g(u + h * u) - g(u - h * u)) / (2 * h * u) for u in times]
        ref = np.prod(lam) * math.exp(-g(times[-1]))
        assert D.coalescent_time_joint(times, x, F, a) == pytest.approx(ref, rel=1e-6)


def test_unconditioned_k2_normalization():
    F = D.FixedT1(1.0)
    total = quad(lambda u: D.coalescent_time_marginal_unconditioned_x(2, u, F, -1.0), 0, 1.0)
    assert total == pytest.approx(1.0, abs=1e-8)


def test_unconditioned_coalescent_mixture():
    for i, (a, t, s, x) in enumerate(random_draws(5, 20)):
        F = D.FixedT1(t)
        k = 2 + i % 4
        b = K.beta(t, a)
        mix = quad_inf(lambda v: D.coalescent_time_marginal(k, s, v, F, a)
                       * D.final_pop_density(v, F, a), b)
        assert D.coalescent_time_marginal_unconditioned_x(k, s, F, a) == pytest.approx(
            mix, rel=1e-8)
        times = np.array([s, 0.5 * s])
        mixj = quad_inf(lambda v: D.coalescent_time_joint(times, v, F, a)
                        * D.final_pop_density(v, F, a), b)
        assert D.coalescent_time_joint_unconditioned_x(times, F, a) == pytest.approx(
            mixj, rel=1e-8)


def test_unconditioned_joint_positive_exploratory():
    # not symmetric in alpha in general; only positivity is asserted
    for a, t, s, x in random_draws(9, 20):
        times = np.array([s, 0.6 * s])
        F = D.FixedT1(t)
        assert D.coalescent_time_joint_unconditioned_x(times, F, a) > 0
        assert D.coalescent_time_joint_unconditioned_x(times, F, -a) > 0


# ---------------------------------------------------------------------------
# sample ancestors


def test_sample_ancestors_normalization():
    ks = np.arange(1, 6)
    total = np.sum(D.sample_ancestors_pmf(ks, 5, 0.3, 2.0, D.FixedT1(1.0), 1.0))
    assert total == pytest.approx(1.0, abs=1e-10)


def brute_force_sample_pmf(k, n, g):
    """Sum over the whole-population count l with exchangeable thinning."""
    total = 0.0
    for l in range(k, 501):
        p_l = stats.poisson.pmf(l - 1, g)
        log_w = (math.lgamma(l + 1) - math.lgamma(k + 1) - math.lgamma(l - k + 1)
                 + math.lgamma(n + 1) - (math.lgamma(l + n) - math.lgamma(l))
                 + math.lgamma(n) - math.lgamma(k) - math.lgamma(n - k + 1))
        total += p_l * math.exp(log_w)
    return total


@pytest.mark.parametrize("regime", [D.FixedT1(1.5), INF1])
def test_sample_ancestors_brute_force(regime):
    n, s, x, a = 6, 0.4, 2.5, 0.7
    g = float(D.ancestor_rate(s, x, regime, a))
    for k in range(1, n + 1):
        ref = brute_force_sample_pmf(k, n, g)
        assert D.sample_ancestors_pmf(k, n, s, x, regime, a) == pytest.approx(ref, abs=1e-10)


def test_sample_of_one():
    for s, x in [(0.1, 0.2), (0.9, 7.0)]:
        assert D.sample_ancestors_pmf(1, 1, s, x, D.FixedT1(1.0), 1.0) == pytest.approx(1.0,
                                                                                   abs=1e-14)


def test_sample_unconditioned_normalization():
    ks = np.arange(1, 5)
    total = np.sum(D.sample_ancestors_pmf_unconditioned_x(ks, 4, 0.5, D.FixedT1(1.0), 0.0))
    assert total == pytest.approx(1.0, abs=1e-10)


def n2_closed_form(s, t, a):
    z = K.beta(s, a) / K.beta(t, a)
    return -2 * z / (1 - z) - 2 * z / (1 - z) ** 2 * math.log(z)


def test_sample_unconditioned_n2_closed_form():
    rng = np.random.default_rng(4)
    for _ in range(50):
        a = rng.uniform(-2, 2)
        t = rng.uniform(0.3, 3)
        s = t * rng.uniform(0.05, 0.95)
        F = D.FixedT1(t)
        ref = n2_closed_form(s, t, a)
        assert D.sample_ancestors_pmf_unconditioned_x(1, 2, s, F, a) == pytest.approx(ref,
                                                                                     rel=1e-10)
        assert D.pair_mrca_cdf(s, F, a) == pytest.approx(ref, rel=1e-10)
        assert D.sample_mrca_cdf(2, s, F, a) == pytest.approx(ref, rel=1e-10)


def test_sample_unconditioned_general_n():
    n, s, t, a = 6, 0.3, 1.0, 1.0
    r = K.beta(s, a) / K.beta(t, a)
    ref = r * float(mpmath.hyp2f1(2, 1, n + 1, 1 - r))
    F = D.FixedT1(t)
    assert D.sample_ancestors_pmf_unconditioned_x(1, n, s, F, a) == pytest.approx(ref, rel=1e-10)
    assert D.sample_mrca_cdf(n, s, F, a) == pytest.approx(ref, rel=1e-10)


def test_sample_unconditioned_mixture():
    n, s, t, a = 4, 0.5, 1.2, -0.7
    F = D.FixedT1(t)
    for k in range(1, n + 1):
        mix = quad_inf(lambda x: D.sample_ancestors_pmf(k, n, s, x, F, a)
                       * D.final_pop_density(x, F, a), 1.0)
        assert D.sample_ancestors_pmf_unconditioned_x(k, n, s, F, a) == pytest.approx(
            mix, abs=1e-8)


def test_sample_mrca_cdf_limits_and_monotone():
    F = D.FixedT1(2.0)
    assert D.sample_mrca_cdf(5, 2.0, F, 1.0) == pytest.approx(1.0, abs=1e-15)
    assert D.sample_mrca_cdf(5, 0.0, F, 1.0) == 0.0
    grid = np.linspace(0.0, 2.0, 101)
    v = D.sample_mrca_cdf(5, grid, F, 1.0)
    assert np.all(np.diff(v) >= -1e-15)


# ---------------------------------------------------------------------------
# past population and posteriors


def test_past_pop_inf_t1_critical():
    z, x, s = 1.0, 1.0, 1.0
    assert D.past_pop_density(z, s, x, INF1, 0.0) == pytest.approx(
        D.transition_density(z, x, s, 0.0).density, rel=1e-14)


def test_past_pop_normalization():
    F = D.FixedT1(1.0)
    total = quad_inf(lambda z: D.past_pop_density(z, 0.5, 2.0, F, 1.0), 3.0)
    assert total == pytest.approx(1.0, abs=1e-6)


def test_past_pop_is_bayes_update():
    # one founder family of size z ~ Exp(beta(t - s)) at t - s, evolved to x over s,
    # divided by the single-founder density of x and the survival ratio from t - s to t
    t, s, x = 1.4, 0.5, 1.8
    F = D.FixedT1(t)
    for a in (0.6, -0.6):
        for z in (0.3, 1.0, 2.5):
            prior = math.exp(-z / K.beta(t - s, a)) / K.beta(t - s, a)
            like = D.transition_density(z, x, s, a).density
            survive = K.mu(t, a) / K.mu(t - s, a)
            evidence = survive * math.exp(-x / K.beta(t, a)) / K.beta(t, a)
            assert D.past_pop_density(z, s, x, F, a) == pytest.approx(prior * like / evidence,
                                                                       rel=1e-12)


def test_past_pop_sign_symmetry():
    for a, t, s, x in random_draws(13, 50):
        for regime in (D.FixedT1(t), INF1):
            assert D.past_pop_density(0.7, s, x, regime, a) == D.past_pop_density(
                0.7, s, x, regime, -a)


def test_posterior_t1_normalization():
    total = quad_inf(lambda u: D.posterior_t1_density(u, 1.0, -0.5), 2.0)
    assert total == pytest.approx(1.0, abs=1e-8)


def test_posterior_t1_cdf_is_k0():
    for s in (0.2, 1.0, 4.0):
        assert D.posterior_t1_cdf(s, 1.3, 0.7) == pytest.approx(
            D.ancestors_pmf(0, s, 1.3, UNIF1, 0.7), rel=1e-14)
        via = quad(lambda u: D.posterior_t1_density(u, 1.3, 0.7), 0, s)
        assert D.posterior_t1_cdf(s, 1.3, 0.7) == pytest.approx(via, abs=1e-10)


def test_posterior_t1_sign_symmetry():
    for a, t, s, x in random_draws(17, 30):
        assert D.posterior_t1_density(t, x, a) == D.posterior_t1_density(t, x, -a)


def test_posterior_x0_normalization():
    total = quad_inf(lambda v: D.posterior_x0_density(v, 1.0, 1.0, 0.5), 2.0)
    assert total == pytest.approx(1.0, abs=1e-6)


def test_posterior_x0_exp_prior_limit():
    for x0 in (0.2, 1.0, 3.0):
        lim = D.posterior_x0_density(x0, 1.0, 1.0, 0.5)
        assert D.posterior_x0_density_exp_prior(x0, 1.0, 1.0, 0.5, 1e-6) == pytest.approx(
            lim, abs=1e-4)


def test_posterior_x0_exp_prior_normalized():
    total = quad_inf(lambda v: D.posterior_x0_density_exp_prior(v, 1.0, 1.0, 0.5, 0.8), 2.0)
    assert total == pytest.approx(1.0, abs=1e-8)


def test_posterior_x0_critical():
    assert D.posterior_x0_density(0.7, 1.2, 1.0, 0.0) == D.transition_density(
        0.7, 1.2, 1.0, 0.0).density


# ---------------------------------------------------------------------------
# MRCA joint


def test_mrca_inf_t1_critical_value():
    assert D.mrca_joint_density(1.0, 1.0, 1.0, INF1, 0.0) == pytest.approx(8 * math.exp(-4),
                                                                            rel=1e-14)


def test_mrca_fixed_t1_normalization():
    x, t, a = 2.0, 1.0, 1.0
    F = D.FixedT1(t)
    total = integrate.dblquad(lambda z, s: D.mrca_joint_density(s, z, x, F, a), 0, t,
                              0, np.inf, epsabs=1e-9, epsrel=1e-9)[0]
    assert total == pytest.approx(1.0, abs=1e-5)


def test_mrca_z_marginal_is_t2():
    for a, t, s, x in random_draws(19, 20):
        F = D.FixedT1(t)
        m = quad_inf(lambda z: D.mrca_joint_density(s, z, x, F, a), 1.0)
        assert m == pytest.approx(D.coalescent_time_marginal(2, s, x, F, a), rel=1e-8)
        for regime, k in ((INF1, 2), (UNIF1, 2)):
            m = quad_inf(lambda z: D.mrca_joint_density(s, z, x, regime, a), 1.0)
            assert m == pytest.approx(D.coalescent_time_marginal(k, s, x, regime, a), rel=1e-8)


def test_mrca_sign_symmetry():
    for a, t, s, x in random_draws(23, 30):
        for regime in (D.FixedT1(t), INF1, UNIF1):
            assert D.mrca_joint_density(s, 0.8, x, regime, a) == D.mrca_joint_density(
                s, 0.8, x, regime, -a)


def test_mrca_outside_support():
    assert D.mrca_joint_density(1.5, 1.0, 1.0, D.FixedT1(1.0), 1.0) == 0.0
    assert D.mrca_joint_density(0.5, -1.0, 1.0, INF1, 1.0) == 0.0
    with pytest.raises(DomainError):
        D.mrca_joint_density(0.5, 1.0, 1.0, D.UnifX0(1.0), 1.0)


# ---------------------------------------------------------------------------
# shifted time and large-x limits


def test_shift_values():
    assert D.shift(0.5, 1.0) == 0.0
    assert D.shifted_time(1.7, 0.5, 1.0) == 1.7
    assert D.shift(2250.0, 1.0) == pytest.approx(math.log(4500.0), rel=1e-15)
    assert math.log(4500.0) == pytest.approx(8.4118, abs=5e-5)


def test_shift_round_trip():
    for s in (-3.0, 0.1, 12.0):
        back = D.unshifted_time(D.shifted_time(s, 37.0, 0.6), 37.0, 0.6)
        assert back == pytest.approx(s, abs=1e-14)


def test_shift_requires_supercritical():
    with pytest.raises(DomainError):
        D.shift(1.0, 0.0)
    with pytest.raises(DomainError):
        D.largex_marginal(2, 0.0, -1.0)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_largex_moments(alpha):
    f = lambda u: D.largex_marginal(2, u, alpha)  # noqa: E731
    m1 = quad(lambda u: alpha * u * f(u), -np.inf, np.inf)
    m2 = quad(lambda u: (alpha * u) ** 2 * f(u), -np.inf, np.inf)
    assert m1 == pytest.approx(np.euler_gamma, abs=1e-8)
    assert m2 - m1 ** 2 == pytest.approx(math.pi ** 2 / 6, abs=1e-8)
    g = lambda z: quad(lambda u: D.largex_mrca_joint(u, z, alpha), -np.inf, np.inf)  # noqa: E731
    e1 = quad(lambda z: alpha * z * g(z), 0, np.inf)
    e2 = quad(lambda z: (alpha * z) ** 2 * g(z), 0, np.inf)
    assert e1 == pytest.approx(1.0, abs=1e-10)
    assert e2 - e1 ** 2 == pytest.approx(0.5, abs=1e-10)


def test_largex_marginal_is_gumbel():
    u = np.linspace(-3, 5, 17)
    assert np.allclose(D.largex_marginal(2, u, 1.0), stats.gumbel_r.pdf(u), rtol=1e-13)


def test_largex_joint_k2():
    assert D.largex_joint(np.array([0.4]), 1.3) == pytest.approx(D.largex_marginal(2, 0.4, 1.3),
                                                                 rel=1e-14)


def test_largex_is_limit_of_inf_t1():
    a, x = 1.0, 1e6
    for st_ in (-1.0, 0.5, 3.0):
        s = float(D.unshifted_time(st_, x, a))
        for k in (2, 3, 5):
            assert D.coalescent_time_marginal(k, s, x, INF1, a) == pytest.approx(
                D.largex_marginal(k, st_, a), rel=1e-5)


# ---------------------------------------------------------------------------
# both endpoints


def test_both_endpoints_normalization():
    ls = np.arange(1, 301)
    total = np.sum(D.ancestors_pmf_both_endpoints(ls, 1.0, 1.0, 1.0, 0.5))
    assert total == pytest.approx(1.0, abs=1e-10)


def test_both_endpoints_single_ancestor():
    w = float(D.bessel_argument(1.3, 0.8, 1.1, -0.4))
    ref = w / float(mpmath.besseli(1, 2 * w))
    assert D.ancestors_pmf_both_endpoints(1, 1.3, 0.8, 1.1, -0.4) == pytest.approx(ref, rel=1e-13)


def test_both_endpoints_argument():
    x0, x, t, a = 1.3, 0.8, 1.1, -0.4
    w = math.sqrt(x * x0 * K.mu(t, a) / K.beta(t, a))
    assert D.bessel_argument(x0, x, t, a) == pytest.approx(w, rel=1e-14)
    assert w == pytest.approx(abs(a) * math.sqrt(x * x0) / math.sinh(abs(a) * t / 2), rel=1e-13)


def test_both_endpoints_is_bayes():
    # the posterior of the founder count from the Poisson-gamma components
    x0, x, t, a = 0.9, 1.7, 0.8, 0.6
    comps = np.array([D.transition_density_component(l, x0, x, t, a) for l in range(1, 80)])
    ref = comps / comps.sum()
    got = D.ancestors_pmf_both_endpoints(np.arange(1, 80), x0, x, t, a)
    assert np.allclose(got, ref, rtol=1e-12, atol=1e-300)


@pytest.mark.parametrize("n", [1, 3, 8])
def test_sample_both_endpoints_normalization(n):
    ks = np.arange(1, n + 1)
    total = np.sum(D.sample_ancestors_pmf_both_endpoints(ks, n, 1.0, 1.0, 1.0, 0.5))
    assert total == pytest.approx(1.0, abs=1e-10)


def test_sample_both_endpoints_brute_force():
    x0, x, t, a, n = 0.9, 1.7, 0.8, 0.6, 5
    pl = D.ancestors_pmf_both_endpoints(np.arange(1, 400), x0, x, t, a)
    for k in range(1, n + 1):
        ref = 0.0
        for l, p_l in enumerate(pl, start=1):
            if l < k:
                continue
            log_w = (math.lgamma(l + 1) - math.lgamma(k + 1) - math.lgamma(l - k + 1)
                     + math.lgamma(n + 1) - (math.lgamma(l + n) - math.lgamma(l))
                     + math.lgamma(n) - math.lgamma(k) - math.lgamma(n - k + 1))
            ref += p_l * math.exp(log_w)
        assert D.sample_ancestors_pmf_both_endpoints(k, n, x0, x, t, a) == pytest.approx(
            ref, abs=1e-12)


def test_sample_both_endpoints_large_n():
    # the sample law tends to the population law at k = l with an O(1/n) gap;
    # at n = 40 the gap is near 0.02, so only the rate is asserted
    x0, x, t, a, k = 1.0, 1.0, 1.0, 0.5, 2
    pop = D.ancestors_pmf_both_endpoints(k, x0, x, t, a)
    scaled = []
    for n in (400, 4000, 40000, 400000):
        gap = D.sample_ancestors_pmf_both_endpoints(k, n, x0, x, t, a) - pop
        scaled.append(n * gap)
    assert scaled[-1] / 400000 < 1e-5
    assert np.ptp(scaled[1:]) < 1e-3 * abs(scaled[-1])
    assert abs(scaled[0] - scaled[-1]) < 1e-2 * abs(scaled[-1])


# ---------------------------------------------------------------------------
# mitochondrial Eve


def test_mte_reference_numbers():
    r = D.mte_summary(3e6, 0.0015, 2)
    assert r.alpha_x == 2250
    assert abs(r.mean_generations - 5990) <= 10
    assert abs(r.var_generations - 731_000) <= 2_000
    assert abs(r.mean_population - 1333) <= 5
    assert abs(r.sd_population - 942) <= 3


def test_mte_scaling():
    a = D.mte_summary(3e6, 0.0015, 2)
    b = D.mte_summary(3e6, 0.0015, 4)
    assert b.alpha_x == a.alpha_x / 2
    assert b.mean_population == 2 * a.mean_population


def test_mte_domain():
    for args in [(0, 0.0015, 2), (3e6, 0, 2), (3e6, 0.0015, -1)]:
        with pytest.raises(DomainError):
            D.mte_summary(*args)


def test_mte_consistent_with_largex():
    # E[N] log(lambda) is the mean of the unshifted alpha T2 in the large-x limit
    r = D.mte_summary(3e6, 0.0015, 2)
    assert r.mean_generations * 0.0015 == pytest.approx(np.euler_gamma + math.log(2 * 2250),
                                                        rel=1e-14)
    assert r.as_dict()["alpha_x"] == 2250


# ---------------------------------------------------------------------------
# properties


alphas = st.floats(0.05, 2.5)
signs = st.sampled_from([-1.0, 1.0])
pos = st.floats(0.1, 5.0)
frac = st.floats(0.05, 0.95)


@given(alphas, signs, pos, frac, pos, st.integers(1, 8))
def test_prop_sign_symmetry_bitwise(a, sg, t, f, x, k):
    a = sg * a
    s = f * t
    F = D.FixedT1(t)
    for regime in (F, INF1, UNIF1):
        assert D.ancestors_pmf(k, s, x, regime, a) == D.ancestors_pmf(k, s, x, regime, -a)
        kk = k + 1 if regime is not UNIF1 else k
        assert (D.coalescent_time_marginal(kk, s, x, regime, a)
                == D.coalescent_time_marginal(kk, s, x, regime, -a))
        assert (D.mrca_joint_density(s, x, x, regime, a)
                == D.mrca_joint_density(s, x, x, regime, -a))
    for regime in (F, INF1):
        n = k + 2
        assert (D.sample_ancestors_pmf(k, n, s, x, regime, a)
                == D.sample_ancestors_pmf(k, n, s, x, regime, -a))
        assert D.past_pop_density(x, s, x, regime, a) == D.past_pop_density(x, s, x, regime, -a)
    assert D.posterior_t1_density(t, x, a) == D.posterior_t1_density(t, x, -a)


@given(st.floats(-2.5, 2.5), pos, pos, st.integers(0, 5))
def test_prop_unif_t1_shift(a, s, x, k):
    assert D.ancestors_pmf(k, s, x, UNIF1, a) == pytest.approx(
        D.ancestors_pmf(k + 1, s, x, INF1, a), rel=1e-12, abs=1e-300)
    if k >= 1:
        assert D.coalescent_time_marginal(k, s, x, UNIF1, a) == pytest.approx(
            D.coalescent_time_marginal(k + 1, s, x, INF1, a), rel=1e-12, abs=1e-300)


@pytest.mark.parametrize("a", [0.5, 1.0, 2.0, -0.5, -1.0, -2.0])
def test_limit_consistency(a):
    t = 1e3 / abs(a)
    F = D.FixedT1(t)
    for s in (0.3, 1.0, 4.0):
        for x in (0.5, 2.0):
            for k in (1, 2, 4):
                assert D.ancestors_pmf(k, s, x, F, a) == pytest.approx(
                    D.ancestors_pmf(k, s, x, INF1, a), abs=1e-8)
            for k in (2, 3, 5):
                assert D.coalescent_time_marginal(k, s, x, F, a) == pytest.approx(
                    D.coalescent_time_marginal(k, s, x, INF1, a), abs=1e-8)
            assert D.mrca_joint_density(s, 0.7, x, F, a) == pytest.approx(
                D.mrca_joint_density(s, 0.7, x, INF1, a), abs=1e-8)
            assert D.past_pop_density(0.7, s, x, F, a) == pytest.approx(
                D.past_pop_density(0.7, s, x, INF1, a), abs=1e-8)
            for n in (2, 5):
                assert D.sample_ancestors_pmf(1, n, s, x, F, a) == pytest.approx(
                    D.sample_ancestors_pmf(1, n, s, x, INF1, a), abs=1e-8)


@given(st.floats(-2.5, 2.5), pos, frac, st.integers(2, 6))
def test_prop_sample_mrca_matches_pmf(a, t, f, n):
    F = D.FixedT1(t)
    s = f * t
    assert D.sample_mrca_cdf(n, s, F, a) == pytest.approx(
        D.sample_ancestors_pmf_unconditioned_x(1, n, s, F, a), rel=1e-10)


@given(st.floats(-2.5, 2.5), pos, frac, pos, st.integers(2, 7))
def test_prop_sample_pmf_sums(a, t, f, x, n):
    F = D.FixedT1(t)
    ks = np.arange(1, n + 1)
    assert np.sum(D.sample_ancestors_pmf(ks, n, f * t, x, F, a)) == pytest.approx(1.0, abs=1e-10)


def test_regime_construction():
    assert D.make_regime("fixed-t1", 2.0) == D.FixedT1(2.0)
    assert D.make_regime("inf_t1") == INF1
    with pytest.raises(DomainError):
        D.make_regime("fixed-t1")
    with pytest.raises(DomainError):
        D.FixedT1(-1.0)
    with pytest.raises(DomainError):
        D.make_regime("bogus")
