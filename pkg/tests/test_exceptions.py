"""
Tests for Conc-Bounds Exceptions
================================
"""

import pytest

from concbounds.exceptions import (
    EXIT_CODE_MAP,
    ConcBoundsError,
    ConvergenceError,
    DimensionMismatchError,
    DomainError,
    QuadratureError,
    SpecMismatchError,
    UsageError,
    exit_code_for,
)


class TestConcBoundsError:
    def test_basic_error(self):
        error = ConcBoundsError("Something went wrong")
        assert str(error) == "[CONC_BOUNDS_ERROR] Something went wrong"
        assert error.message == "Something went wrong"

    def test_custom_code(self):
        error = ConcBoundsError("bad", code="CUSTOM")
        assert error.code == "CUSTOM"
        assert "[CUSTOM]" in str(error)


class TestDomainError:
    def test_carries_argument(self):
        error = DomainError("eps", 1.5, "must lie in the open interval (0, 1)")

        assert error.parameter == "eps"
        assert error.value == 1.5
        assert "eps=1.5" in str(error)
        assert "DOMAIN_ERROR" in str(error)

    def test_is_value_error(self):
        with pytest.raises(ValueError):
            raise DomainError("z", -1.0, "must be >= 0")

    def test_dimension_mismatch(self):
        error = DimensionMismatchError("A", (2, 3), (3, 2))
        assert isinstance(error, DomainError)
        assert error.expected == (2, 3)
        assert error.actual == (3, 2)
        assert error.code == "DIMENSION_MISMATCH"

    def test_spec_mismatch(self):
        error = SpecMismatchError("sigma", 2.0, "sampler certifies variance proxy 1.0")
        assert isinstance(error, DomainError)
        assert error.code == "SPEC_MISMATCH"


class TestNumericalErrors:
    def test_convergence_error(self):
        error = ConvergenceError("bessel_ratio", 10, 1e-3, "nu=0.5, z=100")

        assert error.iterations == 10
        assert error.last_gap == 1e-3
        assert "10 iterations" in str(error)
        assert "nu=0.5" in str(error)
        assert isinstance(error, ArithmeticError)

    def test_quadrature_error(self):
        error = QuadratureError("log_phi", 0.0, 5.0, "roundoff")
        assert error.lower == 0.0
        assert error.upper == 5.0
        assert "[0, 5]" in str(error)
        assert error.code == "QUADRATURE_FAILURE"


class TestExitCodes:
    def test_mapping(self):
        assert EXIT_CODE_MAP[UsageError] == 2
        assert EXIT_CODE_MAP[DomainError] == 2
        assert EXIT_CODE_MAP[ConvergenceError] == 3
        assert EXIT_CODE_MAP[QuadratureError] == 3

    def test_subclasses_inherit_code(self):
        assert exit_code_for(SpecMismatchError("n", 3, "sampler has n=4")) == 2
        assert exit_code_for(DimensionMismatchError("A", (1, 1), (2, 2))) == 2

    def test_unmapped_uses_default(self):
        assert exit_code_for(ZeroDivisionError()) == 3
        assert exit_code_for(ConcBoundsError("x"), default=1) == 1
