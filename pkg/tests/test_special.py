"""Tests for the log-domain special functions."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.special import betaln, gammaln

from countcomp import (
    log_beta,
    log_gamma,
    log_multivariate_beta,
    log_sum_exp,
    rank_one_update_det,
)

# log B(2.5, 3.5), frozen from adaptive quadrature of the integral
# definition int_0^1 t^1.5 (1-t)^2.5 dt (value 0.03681553890925537).
LOG_BETA_2P5_3P5 = -3.3018352699620523


class TestLogGamma:
    def test_known_values(self):
        assert log_gamma(1.0) == pytest.approx(0.0, abs=1e-14)
        assert log_gamma(5.0) == pytest.approx(math.log(24.0), rel=1e-14)
        assert log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-14)

    def test_accuracy_budget_against_scipy(self):
        # Mixed relative error <= 1e-13 across twelve decades.
        grid = np.concatenate(
            [np.logspace(-6, 6, 4001), np.linspace(0.01, 3.0, 2000)]
        )
        got = np.array([log_gamma(a) for a in grid])
        np.testing.assert_allclose(got, gammaln(grid), rtol=1e-13, atol=1e-13)

    def test_recurrence(self):
        # log G(a+1) = log G(a) + log a on 10^4 random points in (0, 100].
        rng = np.random.default_rng(7)
        a = rng.uniform(1e-6, 100.0, size=10_000)
        lhs = np.array([log_gamma(v + 1.0) for v in a])
        rhs = np.array([log_gamma(v) + math.log(v) for v in a])
        np.testing.assert_allclose(lhs, rhs, rtol=1e-12, atol=1e-12)

    @pytest.mark.parametrize("bad", [0.0, -1.0, math.inf, math.nan])
    def test_domain_errors(self, bad):
        with pytest.raises(ValueError):
            log_gamma(bad)


class TestLogMultivariateBeta:
    def test_known_values(self):
        assert log_multivariate_beta((1.0, 1.0)) == pytest.approx(0.0, abs=1e-14)
        assert log_multivariate_beta((1.0, 1.0, 1.0)) == pytest.approx(-math.log(2.0), rel=1e-14)
        assert log_multivariate_beta((2.0, 2.0)) == pytest.approx(math.log(1.0 / 6.0), rel=1e-14)

    def test_against_scipy_pairs(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            a, b = rng.uniform(0.05, 50.0, size=2)
            assert log_multivariate_beta((a, b)) == pytest.approx(
                betaln(a, b), rel=1e-12, abs=1e-12
            )

    @given(
        st.lists(st.floats(0.05, 50.0), min_size=2, max_size=8),
        st.randoms(use_true_random=False),
    )
    @settings(max_examples=200, deadline=None)
    def test_permutation_invariance_exact(self, alpha, shuffler):
        base = log_multivariate_beta(alpha)
        permuted = list(alpha)
        shuffler.shuffle(permuted)
        assert log_multivariate_beta(permuted) == base

    @pytest.mark.parametrize("bad", [(1.0,), (1.0, 0.0), (1.0, -2.0), (1.0, math.nan)])
    def test_domain_errors(self, bad):
        with pytest.raises(ValueError):
            log_multivariate_beta(bad)


class TestLogBeta:
    def test_known_values(self):
        assert log_beta(1.0, 1.0) == pytest.approx(0.0, abs=1e-14)
        assert log_beta(1.0, 5.0) == pytest.approx(math.log(0.2), rel=1e-14)

    def test_matches_quadrature_oracle(self):
        # Recompute the frozen oracle value from the integral definition.
        integral, err = quad(
            lambda t: t**1.5 * (1.0 - t) ** 2.5, 0.0, 1.0, epsabs=1e-14, epsrel=1e-13
        )
        assert err < 1e-12
        assert math.log(integral) == pytest.approx(LOG_BETA_2P5_3P5, abs=1e-12)
        assert log_beta(2.5, 3.5) == pytest.approx(LOG_BETA_2P5_3P5, rel=1e-13)

    def test_equals_multivariate_form(self):
        assert log_beta(2.5, 3.5) == log_multivariate_beta((2.5, 3.5))


class TestRankOneUpdateDet:
    def test_lemma_substitution(self):
        assert rank_one_update_det([2.0, 2.0], [1.0, 1.0], [1.0, 1.0]) == pytest.approx(8.0)

    def test_zero_update(self):
        diag = [3.0, -1.5, 0.25]
        expected = 3.0 * -1.5 * 0.25
        assert rank_one_update_det(diag, [0.0, 0.0, 0.0], [1.0, 2.0, 3.0]) == pytest.approx(
            expected, rel=1e-15
        )

    def test_random_4x4_against_lu(self):
        rng = np.random.default_rng(3)
        d = rng.uniform(0.5, 2.0, size=4)
        u = rng.normal(size=4)
        v = rng.normal(size=4)
        dense = np.linalg.det(np.diag(d) + np.outer(u, v))
        assert rank_one_update_det(d, u, v) == pytest.approx(dense, rel=1e-12)

    def test_many_random_against_lu(self):
        rng = np.random.default_rng(5)
        for _ in range(1000):
            dim = int(rng.integers(2, 9))
            d = rng.uniform(0.2, 3.0, size=dim) * rng.choice([-1.0, 1.0], size=dim)
            u = rng.normal(size=dim)
            v = rng.normal(size=dim)
            dense = np.linalg.det(np.diag(d) + np.outer(u, v))
            assert rank_one_update_det(d, u, v) == pytest.approx(dense, rel=1e-10, abs=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            rank_one_update_det([1.0, 2.0], [1.0], [1.0, 2.0])

    def test_zero_diagonal(self):
        with pytest.raises(ValueError):
            rank_one_update_det([1.0, 0.0], [1.0, 1.0], [1.0, 1.0])


class TestLogSumExp:
    def test_single_zero(self):
        assert log_sum_exp([0.0]) == 0.0

    def test_masses_summing_to_one(self):
        vals = [math.log(0.25), math.log(0.25), math.log(0.5)]
        assert log_sum_exp(vals) == pytest.approx(0.0, abs=1e-15)

    def test_shift_stability(self):
        assert log_sum_exp([-1000.0, -1000.0]) == pytest.approx(-1000.0 + math.log(2.0))

    def test_all_neg_inf(self):
        assert log_sum_exp([-math.inf, -math.inf]) == -math.inf

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            log_sum_exp([])

    @given(
        st.lists(st.floats(-50, 50), min_size=1, max_size=10),
        st.floats(-100, 100),
    )
    @settings(max_examples=200, deadline=None)
    def test_shift_property(self, values, shift):
        base = log_sum_exp(values)
        shifted = log_sum_exp([v + shift for v in values])
        assert shifted == pytest.approx(base + shift, rel=1e-12, abs=1e-10)
