"""
Tests for Deterministic Monte Carlo Streams
===========================================
"""

import math

import numpy as np
import pytest

from concbounds.exceptions import DomainError
from concbounds.streams import (
    CHUNK_SIZE,
    LogMoments,
    MonteCarloConfig,
    chunk_counts,
    derive_seed,
    log_mean_exp,
    pairwise_reduce,
    run_chunks,
    substream,
    uniform_sphere,
)


class TestMonteCarloConfig:
    def test_defaults(self):
        config = MonteCarloConfig()
        assert config.chunk_size == CHUNK_SIZE == 65_536
        assert config.workers == 1
        assert config.se_margin == 3.0
        assert config.confidence == 0.999

    @pytest.mark.parametrize(
        "kwargs",
        [{"chunk_size": 0}, {"workers": 0}, {"se_margin": 0.0}, {"confidence": 1.0}],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(DomainError):
            MonteCarloConfig(**kwargs)


class TestSubstreams:
    def test_reproducible(self):
        a = substream(7, 2, 3).standard_normal(5)
        b = substream(7, 2, 3).standard_normal(5)
        np.testing.assert_array_equal(a, b)

    def test_independent_keys(self):
        base = substream(7, 2, 3).standard_normal(5)
        assert not np.array_equal(base, substream(7, 2, 4).standard_normal(5))
        assert not np.array_equal(base, substream(7, 1, 3).standard_normal(5))
        assert not np.array_equal(base, substream(8, 2, 3).standard_normal(5))
        assert not np.array_equal(base, substream(7, 2, 3, path=(1,)).standard_normal(5))

    def test_negative_seed(self):
        with pytest.raises(DomainError):
            substream(-1, 0, 0)

    def test_derive_seed(self):
        assert derive_seed(5, 1) == derive_seed(5, 1)
        assert derive_seed(5, 1) != derive_seed(5, 2)
        assert derive_seed(5, 1) != derive_seed(6, 1)
        assert derive_seed(5, 1) >= 0


class TestChunking:
    def test_chunk_counts(self):
        assert chunk_counts(10, 4) == [4, 4, 2]
        assert chunk_counts(8, 4) == [4, 4]
        assert chunk_counts(3, 4) == [3]

    def test_chunk_counts_rejects_zero(self):
        with pytest.raises(DomainError):
            chunk_counts(0)

    def test_pairwise_reduce_keeps_order(self):
        assert pairwise_reduce(list("abcdefg"), lambda x, y: x + y) == "abcdefg"

    def test_pairwise_reduce_empty(self):
        with pytest.raises(DomainError):
            pairwise_reduce([], lambda x, y: x + y)

    def test_run_chunks_order(self):
        config = MonteCarloConfig(chunk_size=3, workers=4)
        assert run_chunks(lambda i, c: (i, c), 10, config) == [(0, 3), (1, 3), (2, 3), (3, 1)]


class TestLogMoments:
    def test_matches_direct(self):
        x = np.random.default_rng(0).normal(size=1_000)
        m = LogMoments.from_exponents(x)
        w = np.exp(x)
        assert m.log_mean == pytest.approx(math.log(np.mean(w)), rel=1e-12)
        expected_se = np.std(w) / (np.mean(w) * math.sqrt(x.size))
        assert m.std_error == pytest.approx(expected_se, rel=1e-9)

    def test_merge(self):
        x = np.random.default_rng(1).normal(scale=5.0, size=2_000)
        whole = LogMoments.from_exponents(x)
        merged = LogMoments.from_exponents(x[:700]).merge(LogMoments.from_exponents(x[700:]))
        assert merged.count == whole.count
        assert merged.log_mean == pytest.approx(whole.log_mean, rel=1e-12)
        assert merged.std_error == pytest.approx(whole.std_error, rel=1e-9)

    def test_huge_exponents(self):
        m = LogMoments.from_exponents(np.array([1_000.0, 1_000.0]))
        assert m.log_mean == pytest.approx(1_000.0)
        assert m.std_error == 0.0

    def test_empty(self):
        with pytest.raises(DomainError):
            LogMoments.from_exponents(np.array([]))


class TestLogMeanExp:
    def test_constant(self):
        moments = log_mean_exp(lambda rng, count: np.full(count, 2.5), 500, seed=0)
        assert moments.log_mean == pytest.approx(2.5)
        assert moments.count == 500

    def test_worker_independent(self):
        def draw(rng, count):
            return rng.standard_normal(count)

        serial = log_mean_exp(draw, 5_000, 3, config=MonteCarloConfig(chunk_size=512))
        threaded = log_mean_exp(
            draw, 5_000, 3, config=MonteCarloConfig(chunk_size=512, workers=3)
        )
        assert serial == threaded

    def test_gaussian_mgf(self):
        def draw(rng, count):
            return rng.standard_normal(count)

        moments = log_mean_exp(draw, 200_000, seed=4)
        assert abs(moments.log_mean - 0.5) <= 4.0 * moments.std_error


class TestUniformSphere:
    def test_unit_norm(self):
        points = uniform_sphere(np.random.default_rng(0), 100, 7)
        np.testing.assert_allclose(np.linalg.norm(points, axis=1), 1.0, rtol=1e-14)

    def test_one_dimension(self):
        points = uniform_sphere(np.random.default_rng(0), 50, 1)
        assert set(np.unique(points)) <= {-1.0, 1.0}
