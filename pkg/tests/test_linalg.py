"""
Tests for Operator Norms
========================
"""

import numpy as np
import pytest

from concbounds.exceptions import ConvergenceError, DomainError
from concbounds.montecarlo.linalg import operator_norm, operator_norms


def two_by_two(A: np.ndarray) -> np.ndarray:
    a, b, c, d = A[:, 0, 0], A[:, 0, 1], A[:, 1, 0], A[:, 1, 1]
    s = a * a + b * b + c * c + d * d
    det = a * d - b * c
    return np.sqrt((s + np.sqrt(s * s - 4.0 * det * det)) / 2.0)


class TestOperatorNorm:
    def test_identity(self):
        assert operator_norm(np.eye(2)) == pytest.approx(1.0, rel=1e-14)

    def test_known_matrix(self):
        assert operator_norm(np.array([[3.0, 0.0], [4.0, 5.0]])) == pytest.approx(
            np.sqrt(45.0), rel=1e-12
        )

    def test_rank_one(self):
        u = np.array([2.0, 0.0, 0.0])
        v = np.array([0.0, 3.0 / np.sqrt(2.0), 3.0 / np.sqrt(2.0)])
        assert operator_norm(np.outer(u, v)) == pytest.approx(6.0, rel=1e-12)

    def test_zero(self):
        assert operator_norm(np.zeros((3, 5))) == 0.0

    def test_matches_svd(self):
        rng = np.random.default_rng(3)
        for shape in [(3, 4), (5, 2), (1, 6), (7, 7)]:
            A = rng.standard_normal(shape)
            expected = np.linalg.svd(A, compute_uv=False)[0]
            assert operator_norm(A, seed=1) == pytest.approx(expected, rel=1e-10)

    def test_repeated_singular_value(self):
        A = np.diag([2.0, 2.0, 1.0])
        assert operator_norm(A) == pytest.approx(2.0, rel=1e-12)

    def test_rejects_vector(self):
        with pytest.raises(DomainError):
            operator_norm(np.ones(3))


class TestOperatorNorms:
    def test_two_by_two_oracle(self):
        batch = np.random.default_rng(0).standard_normal((10_000, 2, 2))
        np.testing.assert_allclose(operator_norms(batch, seed=5), two_by_two(batch), rtol=1e-10)

    def test_mixed_zero_rows(self):
        batch = np.stack([np.zeros((2, 3)), np.ones((2, 3))])
        norms = operator_norms(batch)
        assert norms[0] == 0.0
        assert norms[1] == pytest.approx(np.sqrt(6.0), rel=1e-12)

    def test_rejects_non_finite(self):
        with pytest.raises(DomainError):
            operator_norms(np.full((1, 2, 2), np.nan))

    def test_iteration_cap(self):
        A = np.diag([3.0, 2.0, 1.0])[None, :, :]
        with pytest.raises(ConvergenceError):
            operator_norms(A, max_iterations=1)
