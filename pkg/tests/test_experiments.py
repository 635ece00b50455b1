"""
Tests for Monte Carlo Certification Experiments
===============================================
"""

import math

import numpy as np
import pytest
from scipy import stats

from concbounds.bounds import optimize_eps_matrix_norm_mgf
from concbounds.exceptions import DomainError, SpecMismatchError
from concbounds.models import BoundMethod, BoundParams, SamplerFamily, SamplerSpec, Verdict
from concbounds.montecarlo import (
    amgf_bound_check,
    classify,
    clopper_pearson,
    combine_verdicts,
    coverage_experiment,
    directional_mgf_check,
    lemma4_certification,
    norm_mgf_check,
    norm_quantile,
    sidak_margin,
)
from concbounds.streams import MonteCarloConfig


@pytest.fixture
def gaussian10():
    return SamplerSpec(SamplerFamily.GAUSSIAN_VECTOR, n=10)


@pytest.fixture
def rademacher3():
    return SamplerSpec(SamplerFamily.RADEMACHER_VECTOR, n=3)


class TestVerdicts:
    def test_classify(self):
        assert classify(1.0, 0.1, 1.5) is Verdict.PASS
        assert classify(1.0, 0.1, 1.31) is Verdict.PASS
        assert classify(1.0, 0.1, 1.1) is Verdict.INCONCLUSIVE
        assert classify(1.0, 0.1, 0.71) is Verdict.INCONCLUSIVE
        assert classify(1.0, 0.1, 0.5) is Verdict.FAIL

    def test_classify_margin(self):
        assert classify(1.0, 0.1, 1.15, margin=1.0) is Verdict.PASS

    def test_classify_fail_margin(self):
        assert classify(1.0, 0.1, 0.5, fail_margin=6.0) is Verdict.INCONCLUSIVE
        assert classify(1.0, 0.1, 0.3, fail_margin=6.0) is Verdict.FAIL
        assert classify(1.0, 0.1, 1.31, fail_margin=6.0) is Verdict.PASS

    def test_combine(self):
        assert combine_verdicts([Verdict.PASS, Verdict.PASS]) is Verdict.PASS
        assert combine_verdicts([Verdict.PASS, Verdict.INCONCLUSIVE]) is Verdict.INCONCLUSIVE
        assert combine_verdicts([Verdict.INCONCLUSIVE, Verdict.FAIL]) is Verdict.FAIL
        assert combine_verdicts([]) is Verdict.PASS


class TestSidakMargin:
    def test_single_check(self):
        assert sidak_margin(3.0, 1) == 3.0

    def test_family_rate_matches_single_check(self):
        corrected = sidak_margin(3.0, 20)
        family = 1.0 - (1.0 - stats.norm.sf(corrected)) ** 20
        assert family == pytest.approx(stats.norm.sf(3.0), rel=1e-9)
        assert corrected == pytest.approx(3.817, abs=0.01)

    def test_grows_with_tests(self):
        margins = [sidak_margin(3.0, k) for k in (1, 2, 20, 200, 2_000)]
        assert margins == sorted(margins)
        assert len(set(margins)) == len(margins)

    def test_invalid_count(self):
        with pytest.raises(DomainError):
            sidak_margin(3.0, 0)


class TestClopperPearson:
    def test_all_successes(self):
        lower, upper = clopper_pearson(1_000, 1_000, 0.999)
        assert lower == pytest.approx(0.001 ** (1.0 / 1_000), rel=1e-10)
        assert upper == 1.0

    def test_no_successes(self):
        lower, upper = clopper_pearson(0, 500, 0.999)
        assert lower == 0.0
        assert upper == pytest.approx(1.0 - 0.001 ** (1.0 / 500), rel=1e-10)

    def test_matches_beta(self):
        lower, upper = clopper_pearson(37, 100, 0.95)
        assert lower == pytest.approx(stats.beta.ppf(0.05, 37, 64))
        assert upper == pytest.approx(stats.beta.ppf(0.95, 38, 63))
        assert lower < 0.37 < upper

    def test_invalid(self):
        with pytest.raises(DomainError):
            clopper_pearson(11, 10)
        with pytest.raises(DomainError):
            clopper_pearson(1, 0)
        with pytest.raises(DomainError):
            clopper_pearson(1, 10, level=1.0)


class TestDirectionalMgf:
    def test_rademacher_passes(self, rademacher3):
        report = directional_mgf_check(
            rademacher3, lam=2.0, trials=1, directions=20, samples=100_000, seed=7
        )
        assert report.verdict is Verdict.PASS
        assert report.target == pytest.approx(2.0)
        assert report.details["pass"] == 20
        assert report.statistic < 2.0

    def test_zero_lambda(self, gaussian10):
        report = directional_mgf_check(
            gaussian10, lam=0.0, trials=2, directions=3, samples=1_000, seed=1
        )
        assert report.statistic == 0.0
        assert report.verdict is Verdict.PASS
        assert report.details["pass"] == 6

    def test_matrix_sampler(self):
        spec = SamplerSpec(SamplerFamily.GAUSSIAN_MATRIX, n=3, m=2)
        report = directional_mgf_check(
            spec, lam=1.0, trials=1, directions=3, samples=20_000, seed=2
        )
        assert report.verdict is not Verdict.FAIL
        assert report.details["directions"] == 3

    def test_gaussian_equality_across_seeds(self):
        spec = SamplerSpec(SamplerFamily.GAUSSIAN_VECTOR, n=5)
        for seed in range(10):
            report = directional_mgf_check(
                spec, lam=1.0, trials=1, directions=20, samples=100_000, seed=seed
            )
            assert report.verdict is not Verdict.FAIL, seed
            assert report.details["fail"] == 0
            assert report.details["fail_margin"] == pytest.approx(sidak_margin(3.0, 20))

    def test_reproducible(self, rademacher3):
        serial = MonteCarloConfig(chunk_size=1_000)
        threaded = MonteCarloConfig(chunk_size=1_000, workers=3)
        a = directional_mgf_check(rademacher3, 1.0, 2, 4, 5_000, 11, config=serial)
        b = directional_mgf_check(rademacher3, 1.0, 2, 4, 5_000, 11, config=threaded)
        assert a == b

    def test_too_few_samples(self, rademacher3):
        with pytest.raises(DomainError):
            directional_mgf_check(rademacher3, 1.0, 1, 1, 10, 0)


class TestAmgfBound:
    def test_rademacher_passes(self):
        spec = SamplerSpec(SamplerFamily.RADEMACHER_VECTOR, n=4)
        report = amgf_bound_check(spec, lam=2.0, samples=100_000, seed=3)
        assert report.verdict is Verdict.PASS
        assert report.check == "amgf_bound"

    def test_gaussian_equality_not_failed(self):
        spec = SamplerSpec(SamplerFamily.GAUSSIAN_VECTOR, n=2)
        report = amgf_bound_check(spec, lam=1.0, samples=100_000, seed=42)
        assert report.target == pytest.approx(0.5)
        assert report.verdict is not Verdict.FAIL

    def test_zero_lambda(self, gaussian10):
        report = amgf_bound_check(gaussian10, lam=0.0, samples=1_000, seed=0)
        assert report.statistic == 0.0


class TestNormMgf:
    def test_gaussian_passes(self, gaussian10):
        report = norm_mgf_check(gaussian10, t=1.0, samples=100_000, seed=5)
        assert report.verdict is Verdict.PASS
        expected_target = 0.5 * (math.sqrt(10.0) + 1.0) ** 2 - 5.0
        assert report.target == pytest.approx(expected_target)
        assert report.details["eps_star"] == pytest.approx(math.sqrt(1.0 / (1.0 + math.sqrt(10))))

    def test_zero_t(self, gaussian10):
        report = norm_mgf_check(gaussian10, t=0.0, samples=1_000, seed=5)
        assert report.statistic == 0.0
        assert "eps_star" not in report.details

    def test_gaussian_matrix_passes(self):
        spec = SamplerSpec(SamplerFamily.GAUSSIAN_MATRIX, n=3, m=2)
        report = norm_mgf_check(spec, t=1.0, samples=20_000, seed=5)
        eps, target = optimize_eps_matrix_norm_mgf(2, 3, 1.0, 1.0)
        assert report.target == pytest.approx(target)
        assert report.details["eps_star"] == pytest.approx(eps)
        assert report.verdict is Verdict.PASS
        assert 2.0 < report.statistic < target

    def test_matrix_zero_t(self):
        spec = SamplerSpec(SamplerFamily.GAUSSIAN_MATRIX, n=3, m=2)
        report = norm_mgf_check(spec, t=0.0, samples=1_000, seed=5)
        assert report.statistic == 0.0
        assert report.target == 0.0
        assert report.verdict is Verdict.PASS

    def test_rejects_negative_t(self, gaussian10):
        with pytest.raises(DomainError):
            norm_mgf_check(gaussian10, t=-1.0, samples=1_000, seed=0)


class TestCoverage:
    def test_gaussian_thm3(self, gaussian10):
        params = BoundParams(n=10, sigma=1.0, delta=0.01)
        report = coverage_experiment(gaussian10, BoundMethod.THM3, params, 20_000, seed=7)
        assert report.verdict is Verdict.PASS
        assert report.interval[0] >= 0.99
        assert report.details["radius"] == pytest.approx(6.1971, abs=1e-3)

    @pytest.mark.parametrize("family", list(SamplerFamily)[:3])
    def test_vector_families(self, family):
        spec = SamplerSpec(family, n=10)
        params = BoundParams(n=10, sigma=1.0, delta=0.1)
        for method in [BoundMethod.THM2, BoundMethod.HKZ]:
            report = coverage_experiment(spec, method, params, 10_000, seed=1)
            assert report.verdict is Verdict.PASS

    def test_gaussian_matrix(self):
        spec = SamplerSpec(SamplerFamily.GAUSSIAN_MATRIX, n=4, m=3)
        params = BoundParams(n=4, sigma=1.0, delta=0.01, m=3)
        report = coverage_experiment(spec, BoundMethod.MATRIX_THM4, params, 2_000, seed=9)
        assert report.verdict is Verdict.PASS
        assert report.details["eps_used"] is not None

    def test_workers_do_not_change_result(self, gaussian10):
        params = BoundParams(n=10, sigma=1.0, delta=0.5)
        serial = MonteCarloConfig(chunk_size=700)
        threaded = MonteCarloConfig(chunk_size=700, workers=4)
        a = coverage_experiment(gaussian10, BoundMethod.HKZ, params, 5_000, 3, serial)
        b = coverage_experiment(gaussian10, BoundMethod.HKZ, params, 5_000, 3, threaded)
        assert a.details["successes"] == b.details["successes"]

    def test_sigma_mismatch(self, gaussian10):
        params = BoundParams(n=10, sigma=2.0, delta=0.01)
        with pytest.raises(SpecMismatchError):
            coverage_experiment(gaussian10, BoundMethod.THM3, params, 1_000, seed=0)

    def test_dimension_mismatch(self, gaussian10):
        params = BoundParams(n=9, sigma=1.0, delta=0.01)
        with pytest.raises(SpecMismatchError):
            coverage_experiment(gaussian10, BoundMethod.THM3, params, 1_000, seed=0)

    def test_method_mismatch(self, gaussian10):
        params = BoundParams(n=10, sigma=1.0, delta=0.01, m=2)
        with pytest.raises(SpecMismatchError):
            coverage_experiment(gaussian10, BoundMethod.MATRIX_THM4, params, 1_000, seed=0)


class TestNormQuantile:
    def test_gaussian(self, gaussian10):
        q = norm_quantile(gaussian10, 0.1, 50_000, seed=4)
        assert q == pytest.approx(math.sqrt(stats.chi2.ppf(0.9, 10)), abs=0.05)

    def test_invalid_delta(self, gaussian10):
        with pytest.raises(DomainError):
            norm_quantile(gaussian10, 1.0, 1_000, seed=0)


class TestLemma4:
    def test_identity(self):
        reports = lemma4_certification([np.eye(2)], 3.0, [0.1 * k for k in range(1, 10)],
                                       samples=50_000, seed=1)
        assert len(reports) == 1
        report = reports[0]
        assert report.verdict is Verdict.PASS
        assert report.spec is None
        assert report.details["opnorm"] == pytest.approx(1.0)
        assert report.target <= report.details["chain"] + 1e-12

    def test_per_matrix_seeds(self):
        matrices = [np.ones((2, 3)), np.ones((2, 3))]
        reports = lemma4_certification(matrices, 1.0, [0.5], samples=1_000, seed=2)
        assert [r.details["index"] for r in reports] == [0, 1]
        assert reports[0].seed != reports[1].seed

    def test_empty_grid(self):
        with pytest.raises(DomainError):
            lemma4_certification([np.eye(2)], 1.0, [], samples=1_000, seed=0)
