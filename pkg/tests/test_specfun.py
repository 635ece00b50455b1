"""
Tests for Special Functions
===========================
"""

import math

import numpy as np
import pytest
from scipy import special, stats

from concbounds.exceptions import ConvergenceError, DomainError
from concbounds.models import BesselOrder
from concbounds.specfun import (
    adaptive_simpson,
    amos_lower_bound,
    bessel_ratio,
    big_g,
    big_g_path,
    chi_square_cdf,
    chi_square_quantile,
    regularized_lower_incomplete_gamma,
)


def closed_form_g(n: int, z: float) -> float:
    """∫₀ᶻ √(1+(a/y)²) - a/y dy with a = n/2."""
    a = n / 2.0
    root = math.hypot(z, a)
    return root - a - a * math.log((a + root) / (2.0 * a))


class TestBesselRatio:
    def test_zero(self):
        result = bessel_ratio(0.0, 0.0)
        assert result.value == 0.0
        assert result.iterations == 0

    def test_half_integer(self):
        # I_{3/2}/I_{1/2} = coth z - 1/z
        expected = 1.0 / math.tanh(2.0) - 0.5
        assert bessel_ratio(0.5, 2.0).value == pytest.approx(expected, rel=1e-13)
        assert expected == pytest.approx(0.537315, abs=1e-6)

    def test_order_zero(self):
        assert bessel_ratio(0.0, 1.0).value == pytest.approx(0.446390, abs=1e-6)

    def test_accepts_bessel_order(self):
        assert bessel_ratio(BesselOrder(1.0), 3.0).value == bessel_ratio(1.0, 3.0).value

    @pytest.mark.parametrize("nu", [-0.5, 0.0, 0.5, 1.5, 4.0, 49.0])
    def test_matches_scaled_bessel(self, nu):
        for z in np.geomspace(1e-3, 500.0, 25):
            expected = special.ive(nu + 1.0, z) / special.ive(nu, z)
            assert bessel_ratio(nu, float(z)).value == pytest.approx(expected, rel=1e-10)

    def test_bounded_for_large_z(self):
        value = bessel_ratio(0.0, 1e6).value
        assert 0.999 < value < 1.0

    def test_domain(self):
        with pytest.raises(DomainError):
            bessel_ratio(-1.0, 1.0)
        with pytest.raises(DomainError):
            bessel_ratio(0.0, -1.0)

    def test_iteration_cap(self):
        with pytest.raises(ConvergenceError) as exc_info:
            bessel_ratio(0.0, 50.0, max_iterations=2)
        assert exc_info.value.iterations == 2


class TestAmosLowerBound:
    def test_tangent_point(self):
        # z₀ = εn/(1-ε²) with ε = 0.5, n = 4
        assert amos_lower_bound(4, 8.0 / 3.0) == pytest.approx(0.5, rel=1e-14)

    def test_known_value(self):
        assert amos_lower_bound(2, 1.0) == pytest.approx(math.sqrt(2.0) - 1.0, rel=1e-14)

    def test_limit(self):
        assert amos_lower_bound(2, 1e8) == pytest.approx(1.0, abs=1e-7)

    def test_small_z_no_cancellation(self):
        # g(z) ≈ z/n as z → 0
        assert amos_lower_bound(10, 1e-9) == pytest.approx(1e-10, rel=1e-6)

    def test_below_ratio(self):
        for n in range(1, 21):
            for z in np.geomspace(0.01, 100.0, 30):
                ratio = bessel_ratio((n - 2) / 2.0, float(z)).value
                assert ratio >= amos_lower_bound(n, float(z)) - 1e-12

    def test_domain(self):
        with pytest.raises(DomainError):
            amos_lower_bound(2, 0.0)


class TestBigG:
    def test_zero(self):
        assert big_g(3, 0.0) == 0.0

    def test_tangent_value(self):
        z0 = 8.0 / 3.0
        expected = 4.0 / 3.0 + 2.0 * math.log(0.75)
        assert big_g(4, z0) == pytest.approx(expected, abs=1e-9)
        assert expected == pytest.approx(0.757969, abs=1e-6)

    @pytest.mark.parametrize("n", [1, 2, 5, 30])
    def test_closed_form(self, n):
        for z in [0.01, 1.0, 7.5, 120.0]:
            assert big_g(n, z) == pytest.approx(closed_form_g(n, z), abs=1e-8)

    def test_trapezoid(self):
        y = np.linspace(0.0, 1.0, 1_000_001)[1:]
        g = np.sqrt(1.0 + 1.0 / y ** 2) - 1.0 / y
        trapezoid = float(np.sum(0.5 * (g[1:] + g[:-1])) * (y[1] - y[0])) + 0.5 * g[0] * y[0]
        assert big_g(2, 1.0) == pytest.approx(trapezoid, abs=1e-8)

    def test_convex(self):
        for a, b in [(0.5, 3.0), (2.0, 40.0)]:
            mid = big_g(6, 0.5 * (a + b))
            assert mid <= 0.5 * (big_g(6, a) + big_g(6, b)) + 1e-10

    def test_path_matches_pointwise(self):
        zs = [0.0, 0.3, 1.0, 4.0, 25.0]
        np.testing.assert_allclose(big_g_path(3, zs), [big_g(3, z) for z in zs], atol=1e-9)

    def test_path_rejects_unsorted(self):
        with pytest.raises(DomainError):
            big_g_path(3, [1.0, 0.5])


class TestAdaptiveSimpson:
    def test_polynomial_exact(self):
        assert adaptive_simpson(lambda x: x ** 3, 0.0, 2.0) == pytest.approx(4.0, abs=1e-12)

    def test_empty_interval(self):
        assert adaptive_simpson(math.exp, 1.0, 1.0) == 0.0


class TestIncompleteGamma:
    def test_exponential(self):
        value = regularized_lower_incomplete_gamma(1.0, 1.0)
        assert value == pytest.approx(1.0 - math.exp(-1.0), rel=1e-14)

    def test_erf(self):
        value = regularized_lower_incomplete_gamma(0.5, 0.5)
        assert value == pytest.approx(math.erf(math.sqrt(0.5)), rel=1e-13)
        assert value == pytest.approx(0.682689, abs=1e-6)

    def test_zero(self):
        assert regularized_lower_incomplete_gamma(5.0, 0.0) == 0.0

    def test_matches_scipy(self):
        for a in [0.5, 1.0, 3.0, 12.5, 100.0]:
            for x in [0.1, 1.0, 5.0, 20.0, 150.0]:
                expected = special.gammainc(a, x)
                assert regularized_lower_incomplete_gamma(a, x) == pytest.approx(
                    expected, rel=1e-10, abs=1e-300
                )

    def test_domain(self):
        with pytest.raises(DomainError):
            regularized_lower_incomplete_gamma(0.0, 1.0)
        with pytest.raises(DomainError):
            regularized_lower_incomplete_gamma(1.0, -1.0)


class TestChiSquare:
    def test_cdf_matches_scipy(self):
        for n in [1, 2, 7, 50]:
            for x in [0.5, 3.0, 30.0]:
                assert chi_square_cdf(n, x) == pytest.approx(stats.chi2.cdf(x, n), rel=1e-10)

    def test_quantile_exponential(self):
        assert chi_square_quantile(2, 1.0 - math.exp(-1.0)) == pytest.approx(2.0, rel=1e-10)

    def test_quantile_ten(self):
        q = chi_square_quantile(10, 0.99)
        assert q == pytest.approx(23.209, abs=1e-3)
        assert chi_square_cdf(10, q) == pytest.approx(0.99, abs=1e-12)

    def test_quantile_one(self):
        assert chi_square_quantile(1, 0.682689492137) == pytest.approx(1.0, rel=1e-8)

    def test_quantile_matches_scipy(self):
        for n in [1, 3, 20, 200]:
            for p in [0.5, 0.9, 0.999]:
                assert chi_square_quantile(n, p) == pytest.approx(
                    stats.chi2.ppf(p, n), rel=1e-9
                )

    def test_quantile_domain(self):
        with pytest.raises(DomainError):
            chi_square_quantile(3, 1.0)
