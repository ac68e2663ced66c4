"""Statistical tests of the samplers against analytic laws.

Fixed seeds throughout; thresholds are loose enough (p > 0.001, a few
standard errors) that these are stable, not flaky.
"""

import math

import numpy as np
import pytest
from scipy import stats

from countcomp import (
    Composition,
    CountVector,
    DirichletParams,
    dirichlet_sample,
    enumerate_compositions,
    gamma_sample,
    multinomial_log_pmf,
    multinomial_sample,
    negative_binomial_log_pmf,
    negative_binomial_sample_via_mixture,
    poisson_sample,
)
from countcomp.checks import _chi_square_gof

N = 100_000


def test_samplers_are_deterministic_given_seed():
    def draw_all(seed):
        rng = np.random.default_rng(seed)
        return (
            [gamma_sample(2.0, 1.0, rng) for _ in range(10)],
            [poisson_sample(4.0, rng) for _ in range(10)],
            [negative_binomial_sample_via_mixture(2.0, 1.0, rng) for _ in range(10)],
            dirichlet_sample(DirichletParams([2.0, 3.0, 5.0]), rng).entries.tolist(),
            multinomial_sample(9, Composition([0.2, 0.3, 0.5]), rng).counts.tolist(),
        )

    assert draw_all(123) == draw_all(123)
    assert draw_all(123) != draw_all(124)


class TestGammaSampler:
    def test_shape_one_is_exponential(self):
        rng = np.random.default_rng(2)
        theta = 1.7
        draws = [gamma_sample(1.0, theta, rng) for _ in range(N)]
        _, p = stats.kstest(draws, stats.expon(scale=theta).cdf)
        assert p > 0.001

    def test_mean(self):
        rng = np.random.default_rng(3)
        r, theta = 3.2, 0.6
        draws = np.array([gamma_sample(r, theta, rng) for _ in range(N)])
        se = draws.std(ddof=1) / math.sqrt(N)
        assert abs(draws.mean() - r * theta) < 3.0 * se

    def test_small_shape_boost_branch(self):
        rng = np.random.default_rng(5)
        draws = [gamma_sample(0.5, 2.0, rng) for _ in range(N)]
        _, p = stats.kstest(draws, stats.gamma(a=0.5, scale=2.0).cdf)
        assert p > 0.001

    def test_common_scale_summation(self):
        # Gamma(r1, t) + Gamma(r2, t) ~ Gamma(r1 + r2, t).
        rng = np.random.default_rng(7)
        r1, r2, theta = 1.3, 2.2, 0.7
        draws = [
            gamma_sample(r1, theta, rng) + gamma_sample(r2, theta, rng) for _ in range(N)
        ]
        _, p = stats.kstest(draws, stats.gamma(a=r1 + r2, scale=theta).cdf)
        assert p > 0.001

    def test_domain(self):
        rng = np.random.default_rng(1)
        with pytest.raises(ValueError):
            gamma_sample(0.0, 1.0, rng)
        with pytest.raises(ValueError):
            gamma_sample(1.0, -1.0, rng)


class TestPoissonSampler:
    def test_zero_probability_rate_one(self):
        rng = np.random.default_rng(11)
        draws = np.array([poisson_sample(1.0, rng) for _ in range(N)])
        p_zero = (draws == 0).mean()
        se = math.sqrt(math.exp(-1.0) * (1.0 - math.exp(-1.0)) / N)
        assert abs(p_zero - math.exp(-1.0)) < 3.0 * se

    def test_mean_and_variance_rate_four(self):
        rng = np.random.default_rng(13)
        draws = np.array([poisson_sample(4.0, rng) for _ in range(N)])
        mean_se = draws.std(ddof=1) / math.sqrt(N)
        assert abs(draws.mean() - 4.0) < 3.0 * mean_se
        # Var of the sample variance of a Poisson: (mu + 2 mu^2) / N, roughly.
        var_se = math.sqrt((4.0 + 2.0 * 16.0) / N)
        assert abs(draws.var(ddof=1) - 4.0) < 3.0 * var_se

    def test_superposition(self):
        # Sum at rates (a, b) matches a single draw at a + b.
        rng = np.random.default_rng(17)
        a, b = 1.5, 2.5
        summed = np.array([poisson_sample(a, rng) + poisson_sample(b, rng) for _ in range(N)])
        direct = np.array([poisson_sample(a + b, rng) for _ in range(N)])
        top = int(max(summed.max(), direct.max()))
        table = np.stack(
            [np.bincount(summed, minlength=top + 1), np.bincount(direct, minlength=top + 1)]
        )
        keep = table.sum(axis=0) >= 10
        pooled = np.concatenate(
            [table[:, keep], table[:, ~keep].sum(axis=1, keepdims=True)], axis=1
        )
        _, p, _, _ = stats.chi2_contingency(pooled, correction=False)
        assert p > 0.001

    def test_large_rate_rejection_branch(self):
        rng = np.random.default_rng(19)
        rate = 45.0
        draws = np.array([poisson_sample(rate, rng) for _ in range(N)])
        top = int(draws.max())
        observed = np.bincount(draws, minlength=top + 2).astype(float)
        pmf = stats.poisson(rate).pmf(np.arange(top + 1))
        expected = N * np.append(pmf, max(0.0, 1.0 - pmf.sum()))
        _, p = _chi_square_gof(observed, expected)
        assert p > 0.001


class TestNegativeBinomialMixture:
    def test_matches_closed_form_pmf(self):
        rng = np.random.default_rng(23)
        big_r, theta = 2.0, 1.0
        p_succ = theta / (1.0 + theta)
        draws = np.array(
            [negative_binomial_sample_via_mixture(big_r, theta, rng) for _ in range(N)]
        )
        top = int(draws.max())
        observed = np.bincount(draws, minlength=top + 2).astype(float)
        pmf = np.exp([negative_binomial_log_pmf(big_r, p_succ, m) for m in range(top + 1)])
        expected = N * np.append(pmf, max(0.0, 1.0 - pmf.sum()))
        _, p = _chi_square_gof(observed, expected)
        assert p > 0.001

    def test_mean_and_overdispersed_variance(self):
        rng = np.random.default_rng(29)
        big_r, theta = 2.0, 1.0
        draws = np.array(
            [negative_binomial_sample_via_mixture(big_r, theta, rng) for _ in range(N)]
        )
        mean_se = draws.std(ddof=1) / math.sqrt(N)
        assert abs(draws.mean() - big_r * theta) < 3.0 * mean_se
        target_var = big_r * theta * (1.0 + theta)
        fourth = ((draws - draws.mean()) ** 4).mean()
        var_se = math.sqrt(max(fourth - target_var**2, 0.0) / N)
        assert abs(draws.var(ddof=1) - target_var) < 4.0 * var_se


class TestMultinomialSampler:
    def test_zero_trials(self):
        rng = np.random.default_rng(31)
        x = multinomial_sample(0, Composition([0.3, 0.7]), rng)
        assert x.counts.tolist() == [0, 0]

    def test_nearly_degenerate(self):
        rng = np.random.default_rng(37)
        x = multinomial_sample(1000, Composition([1.0 - 1e-12, 1e-12]), rng)
        assert x.counts[0] == 1000

    def test_total_exact(self):
        rng = np.random.default_rng(41)
        for _ in range(100):
            x = multinomial_sample(17, Composition([0.1, 0.2, 0.3, 0.4]), rng)
            assert x.total == 17

    def test_matches_pmf(self):
        rng = np.random.default_rng(43)
        m, probs = 5, Composition([0.2, 0.3, 0.5])
        cells = list(enumerate_compositions(3, m))
        index = {tuple(c.counts.tolist()): i for i, c in enumerate(cells)}
        observed = np.zeros(len(cells))
        for _ in range(N):
            x = multinomial_sample(m, probs, rng)
            observed[index[tuple(x.counts.tolist())]] += 1
        expected = N * np.exp([multinomial_log_pmf(m, probs, c) for c in cells])
        _, p = _chi_square_gof(observed, expected)
        assert p > 0.001


class TestDirichletSampler:
    def test_uniform_marginal_ks(self):
        rng = np.random.default_rng(47)
        params = DirichletParams([1.0, 1.0])
        draws = np.array([dirichlet_sample(params, rng).entries[0] for _ in range(N)])
        _, p = stats.kstest(draws, stats.uniform.cdf)
        assert p > 0.001

    def test_symmetric_mean(self):
        rng = np.random.default_rng(53)
        params = DirichletParams([5.0, 5.0])
        draws = np.array([dirichlet_sample(params, rng).entries[0] for _ in range(N)])
        se = draws.std(ddof=1) / math.sqrt(N)
        assert abs(draws.mean() - 0.5) < 3.0 * se

    def test_mean_vector(self):
        rng = np.random.default_rng(59)
        params = DirichletParams([2.0, 3.0, 5.0])
        draws = np.array([dirichlet_sample(params, rng).entries for _ in range(N)])
        target = np.array([0.2, 0.3, 0.5])
        se = draws.std(axis=0, ddof=1) / math.sqrt(N)
        assert np.all(np.abs(draws.mean(axis=0) - target) < 3.0 * se)

    def test_returns_valid_composition(self):
        rng = np.random.default_rng(61)
        comp = dirichlet_sample(DirichletParams([0.5, 1.0, 2.0]), rng)
        assert comp.entries.sum() == pytest.approx(1.0, abs=1e-12)
        assert np.all(comp.entries > 0)
