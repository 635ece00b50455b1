"""
Concentration Radii
===================

Radius and tail-probability calculators for sub-Gaussian vectors and
matrices with variance proxy σ, together with the ε-optimisation step.

For a δ in (0, 1) each radius r satisfies P(‖X‖ <= r) >= 1 - δ. Methods
with constants report (C₁, C₂) such that

    r² = σ² (C₁·dim + C₂·log(1/δ))

where dim is n for vectors and m + n for matrices.

Example:
    >>> from concbounds.bounds import radius_thm3, resolve_bound
    >>> from concbounds.models import BoundMethod, BoundParams
    >>> p = BoundParams(n=4, sigma=1.0, delta=0.1353352832366127)
    >>> round(radius_thm3(p).radius, 9)
    4.0
    >>> 0.0 < resolve_bound(BoundMethod.THM2, p).eps_used < 1.0   # optimised
    True
"""

import logging
import math
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize

from concbounds.exceptions import DomainError
from concbounds.models import BoundMethod, BoundParams, BoundResult

logger = logging.getLogger(__name__)

# ε optimiser: interior grid used to pre-scan for unimodality, then golden section
EPS_GRID_POINTS = 1_000
EPS_TOL = 1e-10

_LOG2 = math.log(2.0)


def _check_eps(eps: Optional[float], method: str) -> float:
    if eps is None:
        raise DomainError("eps", None, f"{method} requires eps (or use the optimiser)")
    if not (0.0 < eps < 1.0):
        raise DomainError("eps", eps, "must lie in the open interval (0, 1)")
    return float(eps)


def _check_radius(sigma: float, r: float) -> None:
    if not (sigma > 0.0) or math.isinf(sigma):
        raise DomainError("sigma", sigma, "must be finite and > 0")
    if not (r >= 0.0):
        raise DomainError("r", r, "must be >= 0")


def _with_constants(
    method: BoundMethod,
    p: BoundParams,
    dimension: int,
    c1: float,
    c2: float,
    eps: Optional[float] = None,
) -> BoundResult:
    radius = p.sigma * math.sqrt(c1 * dimension + c2 * p.log_inv_delta)
    return BoundResult(
        method=method,
        radius=radius,
        delta=p.delta,
        sigma=p.sigma,
        dimension=dimension,
        c1=c1,
        c2=c2,
        eps_used=eps,
    )


# ============================================================================
# Constants
# ============================================================================

def eps_net_constants(eps: float) -> Tuple[float, float]:
    """
    Classical ε-net constants C₁ = 2·log(1 + 2/(1-ε))/ε², C₂ = 2/ε².

    Natural log throughout; at ε = 1/2 this gives C₁ = 8·ln 5 ≈ 12.8755.
    """
    eps = _check_eps(eps, "eps_net")
    e2 = eps * eps
    return 2.0 * math.log1p(2.0 / (1.0 - eps)) / e2, 2.0 / e2


def thm2_constants(eps: float) -> Tuple[float, float]:
    """AMGF constants C₁ = log(1/(1-ε²))/ε², C₂ = 2/ε² (same C₂ as the ε-net)."""
    eps = _check_eps(eps, "thm2")
    e2 = eps * eps
    return -math.log1p(-e2) / e2, 2.0 / e2


def matrix_constants(eps: float) -> Tuple[float, float]:
    """Matrix constants C₁ = log(1/(1-ε²))/ε⁴, C₂ = 2/ε⁴ (dimension m + n)."""
    eps = _check_eps(eps, "matrix_thm4")
    e4 = eps ** 4
    return -math.log1p(-eps * eps) / e4, 2.0 / e4


# ============================================================================
# Radii
# ============================================================================

def radius_scalar(p: BoundParams) -> BoundResult:
    """
    Scalar radius r = σ√(2·log 2 + 2·log(1/δ)), the inverse of 2e^{-r²/2σ²}.

    Raises:
        DomainError: If n != 1
    """
    if p.n != 1:
        raise DomainError("n", p.n, "the scalar bound applies to n = 1 only")
    return _with_constants(BoundMethod.SCALAR, p, 1, 2.0 * _LOG2, 2.0)


def radius_eps_net(p: BoundParams) -> BoundResult:
    """ε-net radius σ√(C₁n + C₂·log(1/δ))."""
    c1, c2 = eps_net_constants(_check_eps(p.eps, "eps_net"))
    return _with_constants(BoundMethod.EPS_NET, p, p.n, c1, c2, p.eps)


def radius_thm2(p: BoundParams) -> BoundResult:
    """AMGF radius σ√((log(1/(1-ε²))/ε²)·n + (2/ε²)·log(1/δ))."""
    c1, c2 = thm2_constants(_check_eps(p.eps, "thm2"))
    return _with_constants(BoundMethod.THM2, p, p.n, c1, c2, p.eps)


def radius_thm3(p: BoundParams) -> BoundResult:
    """ε-free radius σ(√n + √(2·log(1/δ)))."""
    radius = p.sigma * (math.sqrt(p.n) + math.sqrt(2.0 * p.log_inv_delta))
    return BoundResult(BoundMethod.THM3, radius, p.delta, p.sigma, p.n)


def radius_hkz(p: BoundParams) -> BoundResult:
    """Reference radius σ√(n + 2√(nL) + 2L), L = log(1/δ)."""
    L = p.log_inv_delta
    radius = p.sigma * math.sqrt(p.n + 2.0 * math.sqrt(p.n * L) + 2.0 * L)
    return BoundResult(BoundMethod.HKZ, radius, p.delta, p.sigma, p.n)


def radius_matrix_thm4(p: BoundParams) -> BoundResult:
    """
    Operator-norm radius σ√((log(1/(1-ε²))/ε⁴)·(m+n) + (2/ε⁴)·log(1/δ)).

    Raises:
        DomainError: If m or eps is missing
    """
    if p.m is None:
        raise DomainError("m", None, "matrix bounds require the row count m")
    c1, c2 = matrix_constants(_check_eps(p.eps, "matrix_thm4"))
    return _with_constants(BoundMethod.MATRIX_THM4, p, p.m + p.n, c1, c2, p.eps)


RADIUS_FUNCTIONS: Dict[BoundMethod, Callable[[BoundParams], BoundResult]] = {
    BoundMethod.SCALAR: radius_scalar,
    BoundMethod.EPS_NET: radius_eps_net,
    BoundMethod.THM2: radius_thm2,
    BoundMethod.THM3: radius_thm3,
    BoundMethod.HKZ: radius_hkz,
    BoundMethod.MATRIX_THM4: radius_matrix_thm4,
}


# ============================================================================
# Tail probabilities (inverses of the radii)
# ============================================================================

def tail_delta_scalar(sigma: float, r: float) -> float:
    """δ = min(1, 2e^{-r²/2σ²})."""
    _check_radius(sigma, r)
    rho = r / sigma
    return min(1.0, 2.0 * math.exp(-0.5 * rho * rho))


def tail_delta_eps_net(n: int, sigma: float, eps: float, r: float) -> float:
    """δ = min(1, exp((C₁n - r²/σ²)/C₂))."""
    _check_radius(sigma, r)
    c1, c2 = eps_net_constants(eps)
    rho = r / sigma
    return math.exp(min(0.0, (c1 * n - rho * rho) / c2))


def tail_delta_thm2(n: int, sigma: float, eps: float, r: float) -> float:
    """
    δ = min(1, (1-ε²)^{-n/2}·e^{-ε²r²/(2σ²)}).

    Computed in log domain so large n cannot overflow the prefactor.
    """
    _check_radius(sigma, r)
    eps = _check_eps(eps, "thm2")
    rho = r / sigma
    log_delta = -0.5 * n * math.log1p(-eps * eps) - 0.5 * eps * eps * rho * rho
    return math.exp(min(0.0, log_delta))


def tail_delta_thm3(n: int, sigma: float, r: float) -> float:
    """δ = exp(-(r/σ - √n)²/2) for r >= σ√n, else 1."""
    _check_radius(sigma, r)
    excess = r / sigma - math.sqrt(n)
    if excess <= 0.0:
        return 1.0
    return math.exp(-0.5 * excess * excess)


def tail_delta_hkz(n: int, sigma: float, r: float) -> float:
    """
    Inverse of radius_hkz.

    With ρ = r/σ and s = √L, ρ² = n + 2√n·s + 2s² gives
    s = (-√n + √(2ρ² - n))/2 and δ = e^{-s²}; δ = 1 for ρ² <= n.
    """
    _check_radius(sigma, r)
    rho2 = (r / sigma) ** 2
    if rho2 <= n:
        return 1.0
    s = 0.5 * (math.sqrt(2.0 * rho2 - n) - math.sqrt(n))
    return math.exp(-s * s)


def tail_delta_matrix(m: int, n: int, sigma: float, eps: float, r: float) -> float:
    """δ = min(1, (1-ε²)^{-(m+n)/2}·e^{-ε⁴r²/(2σ²)})."""
    _check_radius(sigma, r)
    eps = _check_eps(eps, "matrix_thm4")
    rho = r / sigma
    log_delta = -0.5 * (m + n) * math.log1p(-eps * eps) - 0.5 * eps ** 4 * rho * rho
    return math.exp(min(0.0, log_delta))


# ============================================================================
# ε optimisation
# ============================================================================

def _minimize_over_eps(objective: Callable[[np.ndarray], np.ndarray], label: str) -> float:
    """
    Minimise a smooth objective over ε ∈ (0, 1).

    A 1,000-point interior grid is scanned first. If the scan is unimodal
    with an interior argmin, golden-section search refines inside the
    bracketing grid cell; otherwise the grid argmin is returned.
    """
    grid = np.linspace(0.0, 1.0, EPS_GRID_POINTS + 2)[1:-1]
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        values = objective(grid)
    values = np.where(np.isfinite(values), values, np.inf)
    i = int(np.argmin(values))

    diffs = np.diff(values)
    unimodal = bool(np.all(diffs[:i] <= 0.0) and np.all(diffs[i:] >= 0.0))
    interior = 0 < i < grid.size - 1
    if not (unimodal and interior):
        logger.warning(
            f"{label}: grid pre-scan not unimodal with interior minimum "
            f"(argmin index {i}); using grid argmin eps={grid[i]:.6f}"
        )
        return float(grid[i])

    def scalar(e: float) -> float:
        return float(objective(np.asarray([e]))[0])

    try:
        res = optimize.minimize_scalar(
            scalar,
            bracket=(grid[i - 1], grid[i], grid[i + 1]),
            method="golden",
            tol=EPS_TOL,
        )
    except ValueError as e:
        # Flat cell: grid[i] does not strictly bracket
        logger.warning(f"{label}: golden section rejected the bracket ({e}); using grid argmin")
        return float(grid[i])

    eps = float(res.x)
    if not (0.0 < eps < 1.0) or scalar(eps) > values[i]:
        logger.warning(f"{label}: golden section left the grid cell; using grid argmin")
        return float(grid[i])
    logger.debug(f"{label}: eps*={eps!r} after {res.nit} golden-section iterations")
    return eps


def _thm2_objective(n: int, L: float) -> Callable[[np.ndarray], np.ndarray]:
    def r2(eps: np.ndarray) -> np.ndarray:
        e2 = eps * eps
        return (-np.log1p(-e2) * n + 2.0 * L) / e2

    return r2


def _eps_net_objective(n: int, L: float) -> Callable[[np.ndarray], np.ndarray]:
    def r2(eps: np.ndarray) -> np.ndarray:
        return (2.0 * np.log1p(2.0 / (1.0 - eps)) * n + 2.0 * L) / (eps * eps)

    return r2


def _matrix_objective(dim: int, L: float) -> Callable[[np.ndarray], np.ndarray]:
    def r2(eps: np.ndarray) -> np.ndarray:
        e2 = eps * eps
        return (-np.log1p(-e2) * dim + 2.0 * L) / (e2 * e2)

    return r2


def optimize_eps_thm2(n: int, sigma: float, delta: float) -> Tuple[float, float]:
    """
    ε minimising radius_thm2 for (n, σ, δ).

    Returns:
        (eps_star, radius)
    """
    p = BoundParams(n=n, sigma=sigma, delta=delta)
    eps = _minimize_over_eps(_thm2_objective(n, p.log_inv_delta), "optimize_eps_thm2")
    return eps, radius_thm2(p.with_eps(eps)).radius


def optimize_eps_eps_net(n: int, sigma: float, delta: float) -> Tuple[float, float]:
    """ε minimising radius_eps_net; returns (eps_star, radius)."""
    p = BoundParams(n=n, sigma=sigma, delta=delta)
    eps = _minimize_over_eps(_eps_net_objective(n, p.log_inv_delta), "optimize_eps_eps_net")
    return eps, radius_eps_net(p.with_eps(eps)).radius


def optimize_eps_matrix(m: int, n: int, sigma: float, delta: float) -> Tuple[float, float]:
    """ε minimising radius_matrix_thm4; depends on (m, n) only through m + n."""
    p = BoundParams(n=n, sigma=sigma, delta=delta, m=m)
    eps = _minimize_over_eps(_matrix_objective(m + n, p.log_inv_delta), "optimize_eps_matrix")
    return eps, radius_matrix_thm4(p.with_eps(eps)).radius


def resolve_bound(method: BoundMethod, params: BoundParams) -> BoundResult:
    """
    Compute the radius for any method, optimising ε when it is needed but absent.

    Raises:
        DomainError: If params are inconsistent with the method
    """
    method = BoundMethod(method)
    if method.needs_eps and params.eps is None:
        if method is BoundMethod.THM2:
            eps, _ = optimize_eps_thm2(params.n, params.sigma, params.delta)
        elif method is BoundMethod.EPS_NET:
            eps, _ = optimize_eps_eps_net(params.n, params.sigma, params.delta)
        else:
            if params.m is None:
                raise DomainError("m", None, "matrix bounds require the row count m")
            eps, _ = optimize_eps_matrix(params.m, params.n, params.sigma, params.delta)
        params = params.with_eps(eps)
    return RADIUS_FUNCTIONS[method](params)


def compare_methods(p: BoundParams) -> List[BoundResult]:
    """
    Every vector radius for one parameter set, in a stable order.

    Order: scalar (n = 1 only), eps_net (supplied ε, else optimised),
    thm2 (optimised ε), thm3, hkz.
    """
    results: List[BoundResult] = []
    if p.n == 1:
        results.append(radius_scalar(p))
    results.append(resolve_bound(BoundMethod.EPS_NET, p))
    results.append(resolve_bound(BoundMethod.THM2, p.with_eps(None)))
    results.append(radius_thm3(p))
    results.append(radius_hkz(p))
    return results


def sweep_methods(
    params: BoundParams,
    axis: str,
    values: Sequence[float],
) -> List[Tuple[float, List[BoundResult]]]:
    """
    compare_methods along a sweep of δ or n, holding the rest of params fixed.

    Raises:
        DomainError: If axis is not "delta" or "n"
    """
    if axis not in ("delta", "n"):
        raise DomainError("axis", axis, "sweep axis must be 'delta' or 'n'")
    rows: List[Tuple[float, List[BoundResult]]] = []
    for value in values:
        if axis == "delta":
            p = BoundParams(n=params.n, sigma=params.sigma, delta=float(value), eps=params.eps)
        else:
            p = BoundParams(n=int(value), sigma=params.sigma, delta=params.delta, eps=params.eps)
        rows.append((value, compare_methods(p)))
    return rows


# ============================================================================
# Moment generating function of the norm
# ============================================================================

def norm_mgf_log_bound(n: int, sigma: float, eps: float, t: float) -> float:
    """Upper bound on log E e^{t‖X‖}: -(n/2)·log(1-ε²) + σ²t²/(2ε²)."""
    eps = _check_eps(eps, "norm_mgf")
    return -0.5 * n * math.log1p(-eps * eps) + (sigma * t) ** 2 / (2.0 * eps * eps)


def norm_mgf_exponent(n: int, sigma: float, eps: float, t: float) -> float:
    """
    Relaxed exponent nε²/(2(1-ε²)) + σ²t²/(2ε²).

    Dominates norm_mgf_log_bound since log(1-ε²) >= ε²/(ε²-1).
    """
    eps = _check_eps(eps, "norm_mgf")
    e2 = eps * eps
    return n * e2 / (2.0 * (1.0 - e2)) + (sigma * t) ** 2 / (2.0 * e2)


def optimal_eps_norm_mgf(n: int, sigma: float, t: float) -> float:
    """Minimiser ε* = √(σt/(σt + √n)) of norm_mgf_exponent."""
    st = sigma * t
    if not st > 0.0:
        raise DomainError("t", t, "sigma * t must be > 0")
    return math.sqrt(st / (st + math.sqrt(n)))


def norm_mgf_exponent_min(n: int, sigma: float, t: float) -> float:
    """Minimum of norm_mgf_exponent over ε: (√n + σt)²/2 - n/2."""
    return 0.5 * (math.sqrt(n) + sigma * t) ** 2 - 0.5 * n


def matrix_norm_mgf_log_bound(m: int, n: int, sigma: float, eps: float, t: float) -> float:
    """Upper bound on log E e^{t‖A‖}: -((m+n)/2)·log(1-ε²) + σ²t²/(2ε⁴)."""
    eps = _check_eps(eps, "matrix_norm_mgf")
    e2 = eps * eps
    return -0.5 * (m + n) * math.log1p(-e2) + (sigma * t) ** 2 / (2.0 * e2 * e2)


def _matrix_norm_mgf_objective(dim: int, st: float) -> Callable[[np.ndarray], np.ndarray]:
    def log_bound(eps: np.ndarray) -> np.ndarray:
        e2 = eps * eps
        return -0.5 * dim * np.log1p(-e2) + st * st / (2.0 * e2 * e2)

    return log_bound


def optimize_eps_matrix_norm_mgf(m: int, n: int, sigma: float, t: float) -> Tuple[float, float]:
    """
    ε minimising matrix_norm_mgf_log_bound for (m, n, σ, t).

    The bound is convex in ε², so the pre-scan is unimodal.

    Returns:
        (eps_star, log_bound)

    Raises:
        DomainError: If σt <= 0
    """
    st = sigma * t
    if not st > 0.0:
        raise DomainError("t", t, "sigma * t must be > 0")
    eps = _minimize_over_eps(
        _matrix_norm_mgf_objective(m + n, st), "optimize_eps_matrix_norm_mgf"
    )
    return eps, matrix_norm_mgf_log_bound(m, n, sigma, eps, t)
