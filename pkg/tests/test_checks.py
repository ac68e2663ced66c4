"""Tests for the verification harness itself."""

import json
import math

import numpy as np
import pytest

from countcomp import (
    CheckReport,
    GammaMixtureParams,
    adaptive_simpson,
    all_passed,
    check_beta_binomial_merge,
    check_conditional_multinomial,
    check_dm_integral,
    check_pi_independent_of_s,
    check_transform_density,
    enumerate_compositions,
    run_all,
)


class TestEnumerateCompositions:
    def test_n2_m2(self):
        got = {tuple(c.counts.tolist()) for c in enumerate_compositions(2, 2)}
        assert got == {(0, 2), (1, 1), (2, 0)}

    def test_counts_match_binomial_oracle(self):
        for n, m in ((2, 2), (3, 2), (4, 10), (5, 6), (1, 4)):
            items = [tuple(c.counts.tolist()) for c in enumerate_compositions(n, m)]
            assert len(items) == math.comb(m + n - 1, n - 1)
            assert len(set(items)) == len(items)  # each exactly once
            assert all(sum(item) == m for item in items)

    def test_n4_m10_is_286(self):
        assert sum(1 for _ in enumerate_compositions(4, 10)) == 286

    def test_m_zero(self):
        assert [c.counts.tolist() for c in enumerate_compositions(3, 0)] == [[0, 0, 0]]

    def test_errors(self):
        with pytest.raises(ValueError):
            list(enumerate_compositions(0, 3))
        with pytest.raises(ValueError):
            list(enumerate_compositions(2, -1))


class TestAdaptiveSimpson:
    def test_beta_integral(self):
        val = adaptive_simpson(lambda t: t**1.5 * (1.0 - t) ** 2.5, 0.0, 1.0, tol=1e-12)
        assert val == pytest.approx(0.03681553890925537, abs=1e-11)

    def test_sine(self):
        assert adaptive_simpson(math.sin, 0.0, math.pi, tol=1e-10) == pytest.approx(
            2.0, abs=1e-9
        )


class TestConditionalMultinomial:
    def test_passes_on_reference_settings(self):
        rng = np.random.default_rng(67)
        rep = check_conditional_multinomial((1.0, 1.0), 2, 30_000, rng, seed=67)
        assert rep.passed and not rep.inconclusive
        rep = check_conditional_multinomial((2.0, 1.0, 1.0), 3, 30_000, rng, seed=67)
        assert rep.passed and not rep.inconclusive

    def test_inconclusive_when_starved(self):
        rng = np.random.default_rng(71)
        rep = check_conditional_multinomial((1.0, 1.0), 2, 40, rng, seed=71)
        assert rep.inconclusive
        assert not rep.passed


class TestPiIndependence:
    def test_independence_not_rejected(self):
        rng = np.random.default_rng(73)
        params = GammaMixtureParams((1.0, 1.0), 1.0)
        rep = check_pi_independent_of_s(params, 30_000, rng, seed=73)
        assert rep.passed

    def test_negative_control_is_rejected(self):
        rng = np.random.default_rng(79)
        params = GammaMixtureParams((1.0, 1.0), 1.0)
        rep = check_pi_independent_of_s(params, 10_000, rng, seed=79, negative_control=True)
        assert rep.passed  # i.e. the test DID reject the constructed dependence
        assert rep.statistic < 0.001

    def test_requires_two_components(self):
        rng = np.random.default_rng(83)
        with pytest.raises(ValueError):
            check_pi_independent_of_s(GammaMixtureParams((1.0, 1.0, 1.0), 1.0), 100, rng)


class TestDmIntegral:
    def test_uniform_case(self):
        rng = np.random.default_rng(89)
        rep = check_dm_integral((1.0, 1.0, 1.0), 2, 30_000, rng, seed=89)
        assert rep.passed

    def test_asymmetric_case(self):
        rng = np.random.default_rng(97)
        rep = check_dm_integral((2.0, 1.0), 5, 30_000, rng, seed=97)
        assert rep.passed


class TestBetaBinomialMerge:
    @pytest.mark.parametrize(
        "r,m",
        [((1.0, 1.0, 1.0), 4), ((2.0, 1.5, 1.5), 7), ((1.5, 2.5), 6), ((0.5, 1.0, 2.0, 0.7), 5)],
    )
    def test_exact_merge(self, r, m):
        rep = check_beta_binomial_merge(r, m, seed=0)
        assert rep.passed
        assert rep.statistic <= 1e-10

    def test_corrupted_tolerance_fails(self):
        # Negative control: an impossible tolerance must produce a failure,
        # and the suite-level verdict must catch it.
        rep = check_beta_binomial_merge((2.0, 1.5, 1.5), 7, seed=0, tol=0.0)
        assert not rep.passed and not rep.inconclusive
        assert not all_passed([rep])


class TestTransformDensity:
    def test_pointwise_both_transforms(self):
        rng = np.random.default_rng(101)
        for transform in ("ratio", "alr"):
            rep = check_transform_density(
                (), 5, 300, rng, seed=101, transform=transform, variant="pointwise"
            )
            assert rep.passed
            assert rep.statistic <= 1e-12

    def test_ks_both_transforms(self):
        rng = np.random.default_rng(103)
        rep = check_transform_density(
            (1.0, 1.0), 2, 20_000, rng, seed=103, transform="ratio", variant="ks"
        )
        assert rep.passed
        rep = check_transform_density(
            (2.0, 3.0), 2, 20_000, rng, seed=103, transform="alr", variant="ks"
        )
        assert rep.passed

    def test_ks_requires_n2(self):
        rng = np.random.default_rng(107)
        with pytest.raises(ValueError):
            check_transform_density((1.0, 1.0, 1.0), 3, 100, rng, variant="ks")


class TestRunAll:
    def test_quick_deterministic_and_green(self):
        first = run_all(424242, "quick")
        second = run_all(424242, "quick")
        assert [r.to_json_dict() for r in first] == [r.to_json_dict() for r in second]
        assert all_passed(first)
        # JSON-lines serialization round-trips.
        for rep in first:
            line = json.dumps(rep.to_json_dict())
            assert json.loads(line)["name"] == rep.name

    def test_different_seeds_differ(self):
        a = run_all(1, "quick")
        b = run_all(2, "quick")
        assert [r.statistic for r in a] != [r.statistic for r in b]

    def test_rejects_unknown_level(self):
        with pytest.raises(ValueError):
            run_all(0, "paranoid")


class TestAllPassed:
    def test_inconclusive_does_not_fail_suite(self):
        ok = CheckReport("a", 0.5, 0.001, True, 10, 0)
        undecided = CheckReport("b", 3.0, 30.0, False, 10, 0, inconclusive=True)
        failed = CheckReport("c", 0.0, 0.001, False, 10, 0)
        assert all_passed([ok, undecided])
        assert not all_passed([ok, undecided, failed])
