"""
Conc-Bounds Exception Classes
=============================

Custom exceptions for parameter validation and numerical failures.
Every public routine raises one of these instead of returning a silently
degraded number.
"""

from typing import Any, Dict, Tuple, Type


class ConcBoundsError(Exception):
    """Base exception for all conc-bounds errors."""

    def __init__(self, message: str, code: str = "CONC_BOUNDS_ERROR"):
        self.message = message
        self.code = code
        super().__init__(message)

    def __str__(self) -> str:
        return f"[{self.code}] {self.message}"


class DomainError(ConcBoundsError, ValueError):
    """
    Raised when an argument lies outside the domain of a routine.

    Examples:
        - eps outside (0, 1)
        - delta at an endpoint of (0, 1)
        - z <= 0 for the Amos bound
    """

    def __init__(self, parameter: str, value: Any, reason: str, code: str = "DOMAIN_ERROR"):
        self.parameter = parameter
        self.value = value
        self.reason = reason
        msg = f"Invalid argument: {parameter}={value!r} - {reason}"
        super().__init__(msg, code)


class DimensionMismatchError(DomainError):
    """Raised when array shapes disagree with the declared dimensions."""

    def __init__(self, parameter: str, expected: Tuple[int, ...], actual: Tuple[int, ...]):
        self.expected = expected
        self.actual = actual
        super().__init__(
            parameter,
            actual,
            f"expected shape {expected}",
            code="DIMENSION_MISMATCH",
        )


class SpecMismatchError(DomainError):
    """
    Raised when bound parameters do not describe the sampled distribution.

    Common causes:
    - sigma differs from the sampler's certified variance proxy
    - n (or m) differs from the sampler's dimensions
    - a vector method requested for a matrix sampler
    """

    def __init__(self, parameter: str, value: Any, reason: str):
        super().__init__(parameter, value, reason, code="SPEC_MISMATCH")


class ConvergenceError(ConcBoundsError, ArithmeticError):
    """
    Raised when an iterative routine hits its iteration cap.

    Carries the iteration count and the last convergence gap so the caller
    can tell a tolerance problem from a parameter problem.
    """

    def __init__(self, routine: str, iterations: int, last_gap: float, detail: str = ""):
        self.routine = routine
        self.iterations = iterations
        self.last_gap = last_gap
        msg = f"{routine} did not converge after {iterations} iterations (last gap {last_gap:.3e})"
        if detail:
            msg += f": {detail}"
        super().__init__(msg, "NO_CONVERGENCE")


class QuadratureError(ConcBoundsError, ArithmeticError):
    """Raised when adaptive quadrature cannot reach the requested tolerance."""

    def __init__(self, routine: str, lower: float, upper: float, detail: str):
        self.routine = routine
        self.lower = lower
        self.upper = upper
        self.detail = detail
        msg = f"{routine} failed on [{lower:g}, {upper:g}]: {detail}"
        super().__init__(msg, "QUADRATURE_FAILURE")


class UsageError(ConcBoundsError):
    """Raised by the command line for inconsistent flag combinations."""

    def __init__(self, message: str):
        super().__init__(message, "USAGE_ERROR")


# Exception class to CLI exit code mapping
EXIT_CODE_MAP: Dict[Type[ConcBoundsError], int] = {
    UsageError: 2,
    DomainError: 2,
    ConvergenceError: 3,
    QuadratureError: 3,
}


def exit_code_for(error: BaseException, default: int = 3) -> int:
    """
    Resolve the CLI exit code for an exception.

    Walks the exception's MRO so subclasses (e.g. SpecMismatchError)
    inherit the code of their nearest mapped ancestor.

    Args:
        error: The raised exception
        default: Code used for unmapped exceptions

    Returns:
        Exit code (2 usage/domain, 3 numerical failure)
    """
    for cls in type(error).__mro__:
        if cls in EXIT_CODE_MAP:
            return EXIT_CODE_MAP[cls]
    return default
