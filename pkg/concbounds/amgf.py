"""
Averaged Moment Generating Function
===================================

The energy function φₙ(z) = E_{ℓ∼S^{n-1}} e^{z⟨ℓ,η⟩} (any unit η) behind the
AMGF Φ_X(λ) = E_X φₙ(‖λX‖), its exponential-growth lower bounds, and Monte
Carlo estimators of the vector and matrix energy functions.

log φₙ is computed without ever forming Γ(n/2) or I_ν(z):

    d/dz log φₙ(z) = I_{n/2}(z) / I_{n/2-1}(z),   log φₙ(0) = 0

so log φₙ(z) is the integral of a ratio bounded in [0, 1). That keeps the
evaluation finite for any z, whereas I_ν(500) already overflows a double.

Example:
    >>> from concbounds.amgf import log_phi, lemma1_lower_bound
    >>> from concbounds.models import PhiQuery
    >>> log_phi(PhiQuery(n=3, z=2.0)).log_value   # log(sinh(2)/2)
    0.5952...
    >>> lemma1_lower_bound(3, 2.0, eps=0.5) <= 0.5952
    True
"""

import logging
import math
import warnings
from typing import Callable, Iterable

import numpy as np
from scipy import integrate

from concbounds import specfun
from concbounds.exceptions import DimensionMismatchError, DomainError, QuadratureError
from concbounds.models import (
    BesselOrder,
    EnergyEstimate,
    LogPhiResult,
    MatrixEnergyEstimate,
    PhiMethod,
    PhiQuery,
)
from concbounds.streams import (
    DEFAULT_CONFIG,
    STREAM_SPHERE,
    MonteCarloConfig,
    log_mean_exp,
    uniform_sphere,
)

logger = logging.getLogger(__name__)

# Below this z the ratio is replaced by its series limit z/(2ν+2) = z/n
SERIES_CUTOFF = 1e-8

# QUADPACK settings for the ratio integral
QUAD_EPSABS = 1e-14
QUAD_EPSREL = 1e-12
QUAD_LIMIT = 500

MIN_MC_SAMPLES = 100

_LOG2 = math.log(2.0)


def _check_eps(eps: float) -> None:
    if not (0.0 < eps < 1.0):
        raise DomainError("eps", eps, "must lie in the open interval (0, 1)")


def _check_dimension(name: str, value: int) -> None:
    if int(value) != value or value < 1:
        raise DomainError(name, value, "must be an integer >= 1")


def _check_samples(samples: int) -> None:
    if samples < MIN_MC_SAMPLES:
        raise DomainError("samples", samples, f"need at least {MIN_MC_SAMPLES} samples")


# ============================================================================
# Exact evaluation
# ============================================================================

def _ratio_integrand(n: int) -> Callable[[float], float]:
    order = BesselOrder.for_dimension(n)

    def ratio(y: float) -> float:
        if y < SERIES_CUTOFF:
            return y / n
        return specfun.bessel_ratio(order, y).value

    return ratio


def _integrate_ratio(n: int, lower: float, upper: float) -> float:
    """∫ I_{n/2}/I_{n/2-1} over [lower, upper] by adaptive Gauss–Kronrod."""
    if upper <= lower:
        return 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, abserr = integrate.quad(
                _ratio_integrand(n),
                lower,
                upper,
                epsabs=QUAD_EPSABS,
                epsrel=QUAD_EPSREL,
                limit=QUAD_LIMIT,
            )
        except integrate.IntegrationWarning as w:
            raise QuadratureError("log_phi", lower, upper, str(w)) from w
    logger.debug(f"ratio integral n={n} [{lower}, {upper}] = {value!r} (+/- {abserr:.1e})")
    return float(value)


def _log_cosh(z: float) -> float:
    return z + math.log1p(math.exp(-2.0 * z)) - _LOG2


def log_phi(q: PhiQuery) -> LogPhiResult:
    """
    Evaluate log φₙ(z).

    - n = 1: log cosh z, computed as z + log((1 + e^{-2z})/2)
    - n >= 2, z < 1e-8: series z²/(2n)
    - n >= 2 otherwise: ∫₀ᶻ I_{n/2}(y)/I_{n/2-1}(y) dy

    Args:
        q: The (n, z) query

    Returns:
        LogPhiResult with log_value >= 0

    Raises:
        ConvergenceError: If a continued fraction inside the quadrature stalls
        QuadratureError: If the quadrature misses its tolerance
    """
    n, z = q.n, float(q.z)
    if n == 1:
        return LogPhiResult(_log_cosh(z), PhiMethod.CLOSED_FORM_HYPERBOLIC)
    if z < SERIES_CUTOFF:
        return LogPhiResult(z * z / (2.0 * n), PhiMethod.SERIES)
    return LogPhiResult(_integrate_ratio(n, 0.0, z), PhiMethod.RATIO_QUADRATURE)


def log_phi_path(n: int, zs: Iterable[float]) -> np.ndarray:
    """
    log φₙ at every point of a nondecreasing grid.

    Integrates the ratio over consecutive grid segments and accumulates, so
    a 200-point grid costs about as much as one evaluation at its end.

    Raises:
        DomainError: If the grid is negative or not sorted
    """
    _check_dimension("n", n)
    z = np.asarray(list(zs), dtype=np.float64)
    if z.size == 0:
        return z
    if np.any(~np.isfinite(z)) or np.any(z < 0.0) or np.any(np.diff(z) < 0.0):
        raise DomainError("zs", "grid", "must be finite, >= 0 and nondecreasing")

    if n == 1:
        return z + np.log1p(np.exp(-2.0 * z)) - _LOG2

    out = np.empty_like(z)
    previous = 0.0
    total = 0.0
    for i, zi in enumerate(z):
        if zi < SERIES_CUTOFF:
            total = zi * zi / (2.0 * n)
        else:
            if previous < SERIES_CUTOFF:
                total = SERIES_CUTOFF * SERIES_CUTOFF / (2.0 * n)
            total += _integrate_ratio(n, max(previous, SERIES_CUTOFF), zi)
        out[i] = total
        previous = zi
    return out


# ============================================================================
# Lower bounds
# ============================================================================

def lemma1_lower_bound(n: int, z: float, eps: float) -> float:
    """
    Log of the exponential-growth bound (1-ε²)^{n/2} e^{εz} <= φₙ(z).

    Returns:
        (n/2)·log(1-ε²) + ε·z

    Raises:
        DomainError: If eps is outside (0, 1)
    """
    _check_dimension("n", n)
    _check_eps(eps)
    return 0.5 * n * math.log1p(-eps * eps) + eps * z


def lemma4_lower_bound(m: int, n: int, z: float, eps: float) -> float:
    """
    Log of the matrix bound (1-ε²)^{(m+n)/2} e^{ε²z} <= Φ_{m,n}(λA), z = ‖λA‖.

    Returns:
        ((m+n)/2)·log(1-ε²) + ε²·z
    """
    _check_dimension("m", m)
    _check_dimension("n", n)
    _check_eps(eps)
    return 0.5 * (m + n) * math.log1p(-eps * eps) + eps * eps * z


def amos_tangent_point(n: int, eps: float) -> float:
    """z₀ = εn/(1-ε²), where the Amos bound g takes the value ε."""
    _check_dimension("n", n)
    _check_eps(eps)
    return eps * n / (1.0 - eps * eps)


def tangent_lower_bound(n: int, z: float, eps: float) -> float:
    """
    Tangent of the convex G at z₀: g(z₀)(z - z₀) + G(z₀) <= G(z) <= log φₙ(z).

    Uses G(z₀) = nε²/(1-ε²) + (n/2)·log(1-ε²); the result coincides with
    lemma1_lower_bound.
    """
    z0 = amos_tangent_point(n, eps)
    g0 = specfun.amos_lower_bound(n, z0)
    big_g0 = n * eps * eps / (1.0 - eps * eps) + 0.5 * n * math.log1p(-eps * eps)
    return g0 * (z - z0) + big_g0


def lemma4_chain(m: int, n: int, z: float, eps: float) -> float:
    """
    Intermediate matrix bound (m'/2)·log(1-ε²) + log φ_{n'}(εz).

    (m', n') is (m, n) ordered so that m' <= n'. The value sits between
    lemma4_lower_bound and log Φ_{m,n}(λA).
    """
    _check_dimension("m", m)
    _check_dimension("n", n)
    _check_eps(eps)
    rows, cols = min(m, n), max(m, n)
    return 0.5 * rows * math.log1p(-eps * eps) + log_phi(PhiQuery(cols, eps * z)).log_value


# ============================================================================
# Monte Carlo estimators
# ============================================================================

def mc_phi(
    n: int,
    z: float,
    samples: int,
    seed: int,
    config: MonteCarloConfig = DEFAULT_CONFIG,
) -> EnergyEstimate:
    """
    Monte Carlo estimate of log φₙ(z) = log E_ℓ e^{z·ℓ₁}, ℓ uniform on S^{n-1}.

    Deterministic given (seed, samples) for any worker count.

    Raises:
        DomainError: If n < 2, z < 0 or samples < 100
    """
    _check_dimension("n", n)
    if n < 2:
        raise DomainError("n", n, "sphere sampling needs n >= 2 (use log cosh for n = 1)")
    PhiQuery(n, z)
    _check_samples(samples)

    def draw(rng: np.random.Generator, count: int) -> np.ndarray:
        return z * uniform_sphere(rng, count, n)[:, 0]

    moments = log_mean_exp(draw, samples, seed, STREAM_SPHERE, config)
    return EnergyEstimate(
        n=n,
        log_estimate=moments.log_mean,
        std_error=moments.std_error,
        samples=samples,
        seed=seed,
    )


def mc_matrix_energy(
    m: int,
    n: int,
    A: np.ndarray,
    lam: float,
    samples: int,
    seed: int,
    config: MonteCarloConfig = DEFAULT_CONFIG,
) -> MatrixEnergyEstimate:
    """
    Monte Carlo estimate of log Φ_{m,n}(λA) = log E_{u,v} e^{λ·uᵀAv}.

    u and v are independent and uniform on S^{m-1} and S^{n-1}. Since
    uᵀAv = vᵀAᵀu, a tall matrix is transposed first so A and Aᵀ give
    bit-identical estimates for the same seed.

    Raises:
        DimensionMismatchError: If A is not m×n
    """
    _check_dimension("m", m)
    _check_dimension("n", n)
    _check_samples(samples)
    A = np.asarray(A, dtype=np.float64)
    if A.shape != (m, n):
        raise DimensionMismatchError("A", (m, n), tuple(A.shape))
    if not np.all(np.isfinite(A)) or not math.isfinite(lam):
        raise DomainError("A", "matrix", "entries and lambda must be finite")

    B = A.T if m > n else A
    rows, cols = B.shape

    def draw(rng: np.random.Generator, count: int) -> np.ndarray:
        u = uniform_sphere(rng, count, rows)
        v = uniform_sphere(rng, count, cols)
        return lam * np.sum((u @ B) * v, axis=1)

    moments = log_mean_exp(draw, samples, seed, STREAM_SPHERE, config)
    return MatrixEnergyEstimate(
        n=n,
        log_estimate=moments.log_mean,
        std_error=moments.std_error,
        samples=samples,
        seed=seed,
        m=m,
    )
