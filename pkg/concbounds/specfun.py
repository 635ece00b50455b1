"""
Special Functions
=================

Scalar special-function primitives behind the averaged moment generating
function:

- the modified-Bessel ratio I_{ν+1}(z)/I_ν(z) by Gauss's continued fraction
- the Amos lower bound g(z) on that ratio and its integral G(z)
- the regularized lower incomplete gamma function and χ² quantiles, used as
  exact oracles for Gaussian norms

No raw I_ν(z) is ever evaluated: the ratio is bounded in [0, 1), so nothing
here can overflow for large z.

All functions are pure and safe to call concurrently.
"""

import logging
import math
from typing import Callable, List, Sequence, Union

from scipy import optimize, special

from concbounds.exceptions import ConvergenceError, DomainError, QuadratureError
from concbounds.models import BesselOrder, RatioResult

logger = logging.getLogger(__name__)

# Continued-fraction step tolerance and iteration cap
BESSEL_RATIO_TOL = 1e-14
MAX_CF_ITERATIONS = 10_000

# Adaptive Simpson defaults for G(z)
QUADRATURE_TOL = 1e-10
MAX_SIMPSON_DEPTH = 50

# Incomplete gamma series / continued fraction
GAMMA_TOL = 1e-15
MAX_GAMMA_ITERATIONS = 10_000

# Lentz guard against division by zero
_TINY = 1e-300


def _check_nonnegative(name: str, value: float) -> None:
    if not (value >= 0.0) or math.isinf(value):
        raise DomainError(name, value, "must be finite and >= 0")


def _check_dimension(n: int) -> None:
    if int(n) != n or n < 1:
        raise DomainError("n", n, "must be an integer >= 1")


# ============================================================================
# Bessel Ratio
# ============================================================================

def bessel_ratio(
    nu: Union[float, BesselOrder],
    z: float,
    tol: float = BESSEL_RATIO_TOL,
    max_iterations: int = MAX_CF_ITERATIONS,
) -> RatioResult:
    """
    Compute I_{ν+1}(z)/I_ν(z) by Gauss's continued fraction.

    Uses the three-term recurrence I_ν/I_{ν+1} = 2(ν+1)/z + I_{ν+2}/I_{ν+1},
    scaled by z to keep every partial denominator away from zero:

        ratio = z / (2(ν+1) + z² / (2(ν+2) + z² / (2(ν+3) + ...)))

    evaluated with the modified Lentz method.

    Args:
        nu: Bessel order ν >= -1/2
        z: Argument z >= 0
        tol: Stop when the Lentz multiplier is within tol of 1
        max_iterations: Iteration cap

    Returns:
        RatioResult with value in [0, 1) and the iteration count

    Raises:
        DomainError: If ν < -1/2 or z < 0
        ConvergenceError: If the cap is hit before the tolerance
    """
    order = nu if isinstance(nu, BesselOrder) else BesselOrder(float(nu))
    _check_nonnegative("z", z)
    if z == 0.0:
        return RatioResult(value=0.0, iterations=0, converged=True)

    v = order.nu
    z2 = z * z
    f = 2.0 * (v + 1.0)
    c = f
    d = 0.0
    gap = math.inf
    for k in range(1, max_iterations + 1):
        b = 2.0 * (v + k + 1.0)
        d = b + z2 * d
        if d == 0.0:
            d = _TINY
        c = b + z2 / c
        if c == 0.0:
            c = _TINY
        d = 1.0 / d
        step = c * d
        f *= step
        gap = abs(step - 1.0)
        if gap < tol:
            return RatioResult(value=z / f, iterations=k, converged=True)

    raise ConvergenceError("bessel_ratio", max_iterations, gap, f"nu={v}, z={z}")


# ============================================================================
# Amos Bound and its Integral
# ============================================================================

def amos_lower_bound(n: int, z: float) -> float:
    """
    Amos lower bound g(z) = √(1 + (n/2z)²) - n/2z on I_{n/2}(z)/I_{n/2-1}(z).

    Evaluated as 1/(√(1 + c²) + c) with c = n/2z, which avoids the
    cancellation of the textbook form for small z.

    Raises:
        DomainError: If z <= 0
    """
    _check_dimension(n)
    if not (z > 0.0) or math.isinf(z):
        raise DomainError("z", z, "Amos bound requires finite z > 0")
    c = n / (2.0 * z)
    return 1.0 / (math.hypot(1.0, c) + c)


def _amos_integrand(n: int) -> Callable[[float], float]:
    def g(y: float) -> float:
        # g(y) -> 0 as y -> 0+
        if y <= 0.0:
            return 0.0
        c = n / (2.0 * y)
        return 1.0 / (math.hypot(1.0, c) + c)

    return g


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = QUADRATURE_TOL,
    max_depth: int = MAX_SIMPSON_DEPTH,
) -> float:
    """
    Integrate f over [a, b] by adaptive Simpson with Richardson correction.

    The interval is first cut into unit-width panels (tolerance shared
    evenly) so that a smooth but long integrand cannot fool the first
    five-point estimate.

    Raises:
        QuadratureError: If a panel needs more than max_depth bisections
    """
    if b == a:
        return 0.0

    def refine(lo: float, f_lo: float, hi: float, f_hi: float, mid: float,
               f_mid: float, whole: float, eps: float, depth: int) -> float:
        left_mid = 0.5 * (lo + mid)
        right_mid = 0.5 * (mid + hi)
        f_lm = f(left_mid)
        f_rm = f(right_mid)
        left = (mid - lo) / 6.0 * (f_lo + 4.0 * f_lm + f_mid)
        right = (hi - mid) / 6.0 * (f_mid + 4.0 * f_rm + f_hi)
        err = left + right - whole
        if abs(err) <= 15.0 * eps:
            return left + right + err / 15.0
        if depth <= 0:
            raise QuadratureError("adaptive_simpson", lo, hi, f"depth limit, error {err:.3e}")
        return (
            refine(lo, f_lo, mid, f_mid, left_mid, f_lm, left, eps / 2.0, depth - 1)
            + refine(mid, f_mid, hi, f_hi, right_mid, f_rm, right, eps / 2.0, depth - 1)
        )

    panels = max(1, int(math.ceil(abs(b - a))))
    width = (b - a) / panels
    panel_tol = tol / panels
    total = 0.0
    f_lo = f(a)
    for i in range(panels):
        lo = a + i * width
        hi = b if i == panels - 1 else lo + width
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        f_hi = f(hi)
        whole = (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi)
        total += refine(lo, f_lo, hi, f_hi, mid, f_mid, whole, panel_tol, max_depth)
        f_lo = f_hi
    return total


def big_g(n: int, z: float, quadrature_tol: float = QUADRATURE_TOL) -> float:
    """
    G(z) = ∫₀ᶻ g(y) dy for the Amos bound g, by adaptive Simpson.

    G(0) = 0 and G is convex since g is increasing.

    Raises:
        DomainError: If z < 0
        QuadratureError: If the quadrature does not converge
    """
    _check_dimension(n)
    _check_nonnegative("z", z)
    if z == 0.0:
        return 0.0
    value = adaptive_simpson(_amos_integrand(n), 0.0, z, tol=quadrature_tol)
    logger.debug(f"G(n={n}, z={z}) = {value!r}")
    return value


def big_g_path(n: int, zs: Sequence[float], quadrature_tol: float = QUADRATURE_TOL) -> List[float]:
    """G at every point of a nondecreasing grid, accumulated segment by segment."""
    _check_dimension(n)
    g = _amos_integrand(n)
    values: List[float] = []
    previous = 0.0
    total = 0.0
    for z in zs:
        _check_nonnegative("z", z)
        if z < previous:
            raise DomainError("zs", z, "grid must be nondecreasing")
        total += adaptive_simpson(g, previous, z, tol=quadrature_tol)
        values.append(total)
        previous = z
    return values


# ============================================================================
# Incomplete Gamma and χ²
# ============================================================================

def regularized_lower_incomplete_gamma(
    a: float,
    x: float,
    tol: float = GAMMA_TOL,
    max_iterations: int = MAX_GAMMA_ITERATIONS,
) -> float:
    """
    Regularized lower incomplete gamma P(a, x).

    Series representation for x < a + 1, Lentz continued fraction for the
    complement Q(a, x) otherwise.

    Args:
        a: Shape a > 0
        x: Argument x >= 0 (x = inf gives 1)

    Returns:
        P(a, x) in [0, 1]

    Raises:
        DomainError: If a <= 0 or x < 0
        ConvergenceError: If the series or continued fraction stalls
    """
    if not (a > 0.0) or math.isinf(a):
        raise DomainError("a", a, "must be finite and > 0")
    if not (x >= 0.0):
        raise DomainError("x", x, "must be >= 0")
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0

    log_prefactor = -x + a * math.log(x) - float(special.gammaln(a))

    if x < a + 1.0:
        term = 1.0 / a
        total = term
        ap = a
        for _ in range(max_iterations):
            ap += 1.0
            term *= x / ap
            total += term
            if abs(term) < abs(total) * tol:
                return min(1.0, total * math.exp(log_prefactor))
        raise ConvergenceError("incomplete_gamma_series", max_iterations, abs(term / total))

    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    gap = math.inf
    for i in range(1, max_iterations + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        step = d * c
        h *= step
        gap = abs(step - 1.0)
        if gap < tol:
            upper = math.exp(log_prefactor) * h
            return min(1.0, max(0.0, 1.0 - upper))
    raise ConvergenceError("incomplete_gamma_continued_fraction", max_iterations, gap)


def chi_square_cdf(n: int, x: float) -> float:
    """CDF of the χ² distribution with n degrees of freedom."""
    _check_dimension(n)
    if x <= 0.0:
        return 0.0
    return regularized_lower_incomplete_gamma(n / 2.0, x / 2.0)


def chi_square_quantile(n: int, p: float) -> float:
    """
    Quantile q of χ²ₙ with P(n/2, q/2) = p, by bisection.

    The bracket [0, n + 20√n + 40·log(1/(1-p))] is doubled until it contains
    the quantile.

    Raises:
        DomainError: If p is not in (0, 1)
        ConvergenceError: If the bracket cannot be found or bisection fails
    """
    _check_dimension(n)
    if not (0.0 < p < 1.0):
        raise DomainError("p", p, "must lie in the open interval (0, 1)")

    def excess(q: float) -> float:
        return chi_square_cdf(n, q) - p

    hi = n + 20.0 * math.sqrt(n) + 40.0 * math.log(1.0 / (1.0 - p))
    expansions = 0
    while excess(hi) < 0.0:
        expansions += 1
        if expansions > 64:
            raise ConvergenceError("chi_square_quantile", expansions, excess(hi), "bracket")
        hi *= 2.0

    try:
        q = optimize.bisect(excess, 0.0, hi, xtol=1e-12, maxiter=500)
    except RuntimeError as e:
        raise ConvergenceError("chi_square_quantile", 500, math.nan, str(e)) from e
    logger.debug(f"chi2 quantile n={n} p={p}: {q!r} ({expansions} bracket expansions)")
    return float(q)
