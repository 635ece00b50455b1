"""
Monte Carlo Certification Experiments
=====================================

Statistical checks of the sub-Gaussian inequalities against seeded
samplers:

- directional MGF:   E e^{λ⟨ℓ,X⟩} <= e^{λ²σ²/2} for sampled unit ℓ
- AMGF:              Φ_X(λ) <= e^{λ²σ²/2}
- MGF of the norm:   log E e^{t‖X‖} <= (√n + σt)²/2 - n/2, or the ε bound for matrices
- coverage:          P(‖X‖ <= r) >= 1 - δ for every radius in `bounds`
- matrix energy:     lower bound on log Φ_{m,n}(λA)

MGF-type checks compare a log-domain estimate against the bound with a
margin of `config.se_margin` standard errors and answer pass, fail or
inconclusive. Coverage uses a one-sided Clopper–Pearson interval.
"""

import logging
import math
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from concbounds import amgf, bounds
from concbounds.exceptions import DomainError, SpecMismatchError
from concbounds.models import (
    BoundMethod,
    BoundParams,
    McReport,
    SamplerSpec,
    TargetSide,
    Verdict,
)
from concbounds.montecarlo.linalg import operator_norm, operator_norms
from concbounds.montecarlo.samplers import draw_chunk
from concbounds.streams import (
    DEFAULT_CONFIG,
    STREAM_DIRECTIONS,
    STREAM_SAMPLES,
    MonteCarloConfig,
    derive_seed,
    log_mean_exp,
    run_chunks,
    substream,
    uniform_sphere,
)

logger = logging.getLogger(__name__)

MIN_SAMPLES = 100


def _check_count(name: str, value: int, minimum: int = 1) -> None:
    if int(value) != value or value < minimum:
        raise DomainError(name, value, f"must be an integer >= {minimum}")


# ============================================================================
# Verdicts and intervals
# ============================================================================

def classify(
    estimate: float,
    std_error: float,
    bound: float,
    margin: float = 3.0,
    fail_margin: Optional[float] = None,
) -> Verdict:
    """
    Verdict for an estimate that should not exceed `bound`.

    PASS if estimate + margin·SE <= bound, FAIL if estimate - fail_margin·SE > bound
    (fail_margin defaults to margin), INCONCLUSIVE otherwise.
    """
    if fail_margin is None:
        fail_margin = margin
    if estimate + margin * std_error <= bound:
        return Verdict.PASS
    if estimate - fail_margin * std_error > bound:
        return Verdict.FAIL
    return Verdict.INCONCLUSIVE


def combine_verdicts(verdicts: Iterable[Verdict]) -> Verdict:
    """FAIL if any check failed, else INCONCLUSIVE if any was, else PASS."""
    seen = set(verdicts)
    if Verdict.FAIL in seen:
        return Verdict.FAIL
    if Verdict.INCONCLUSIVE in seen:
        return Verdict.INCONCLUSIVE
    return Verdict.PASS


def sidak_margin(margin: float, tests: int) -> float:
    """
    Standard-error margin for FAIL over `tests` one-sided checks.

    Under the null each check fails with probability Φ̄(margin') and the
    family fails with probability 1 - (1 - Φ̄(margin'))^tests; margin' is
    chosen so that this equals Φ̄(margin), the rate of a single check.
    """
    _check_count("tests", tests)
    if tests == 1:
        return margin
    single = float(stats.norm.sf(margin))
    per_test = -math.expm1(math.log1p(-single) / tests)
    return float(stats.norm.isf(per_test))


def clopper_pearson(successes: int, trials: int, level: float = 0.999) -> Tuple[float, float]:
    """
    One-sided Clopper–Pearson bounds on a binomial proportion.

    Returns:
        (lower, upper), each holding with probability `level` on its own side
    """
    _check_count("trials", trials)
    if not (0 <= successes <= trials):
        raise DomainError("successes", successes, f"must lie in [0, {trials}]")
    if not (0.0 < level < 1.0):
        raise DomainError("level", level, "must lie in (0, 1)")
    alpha = 1.0 - level
    failures = trials - successes
    lower = 0.0 if successes == 0 else float(stats.beta.ppf(alpha, successes, failures + 1))
    upper = 1.0 if failures == 0 else float(stats.beta.ppf(level, successes + 1, failures))
    return lower, upper


def _interval(estimate: float, std_error: float, margin: float) -> Tuple[float, float]:
    return estimate - margin * std_error, estimate + margin * std_error


# ============================================================================
# MGF checks
# ============================================================================

def _random_directions(spec: SamplerSpec, count: int, seed: int) -> List[Tuple[np.ndarray, ...]]:
    rng = substream(seed, STREAM_DIRECTIONS, 0)
    if spec.is_matrix:
        us = uniform_sphere(rng, count, int(spec.m))  # type: ignore[arg-type]
        vs = uniform_sphere(rng, count, spec.n)
        return [(us[i], vs[i]) for i in range(count)]
    ls = uniform_sphere(rng, count, spec.n)
    return [(ls[i],) for i in range(count)]


def directional_mgf_check(
    spec: SamplerSpec,
    lam: float,
    trials: int,
    directions: int,
    samples: int,
    seed: int,
    config: MonteCarloConfig = DEFAULT_CONFIG,
) -> McReport:
    """
    Certify E e^{λ⟨ℓ,X⟩} <= e^{λ²σ²/2} along random unit directions.

    `directions` unit vectors ℓ (pairs (u, v) with exponent λ·uᵀXv for
    matrix samplers) are drawn once. Each direction is estimated in `trials`
    independent repetitions of `samples` draws. Every (direction, trial)
    estimate passes at `config.se_margin` standard errors and fails only
    beyond the Šidák-corrected margin for directions × trials checks, so a
    Gaussian sampler (equality in every direction) fails no more often
    than a single check would.

    The report's statistic is the largest log estimate seen; its interval
    runs from the largest corrected lower end to the largest upper end.
    """
    _check_count("trials", trials)
    _check_count("directions", directions)
    _check_count("samples", samples, MIN_SAMPLES)
    sigma = float(spec.variance_proxy)  # type: ignore[arg-type]
    target = 0.5 * (lam * sigma) ** 2
    margin = config.se_margin
    fail_margin = sidak_margin(margin, directions * trials)

    worst: Optional[Tuple[float, float]] = None
    lower_end = -math.inf
    upper_end = -math.inf
    verdicts: List[Verdict] = []
    for d, direction in enumerate(_random_directions(spec, directions, seed)):

        def draw(rng: np.random.Generator, count: int, direction=direction) -> np.ndarray:
            X = draw_chunk(spec, rng, count)
            if spec.is_matrix:
                u, v = direction
                return lam * np.einsum("i,bij,j->b", u, X, v)
            return lam * (X @ direction[0])

        for t in range(trials):
            moments = log_mean_exp(draw, samples, seed, STREAM_SAMPLES, config, path=(d, t))
            estimate, se = moments.log_mean, moments.std_error
            verdict = classify(estimate, se, target, margin, fail_margin)
            verdicts.append(verdict)
            if verdict is not Verdict.PASS:
                logger.info(
                    f"direction {d} trial {t}: log MGF {estimate:.6g} +/- {se:.2g} "
                    f"vs {target:.6g} -> {verdict.value}"
                )
            if worst is None or estimate > worst[0]:
                worst = (estimate, se)
            lower_end = max(lower_end, estimate - fail_margin * se)
            upper_end = max(upper_end, estimate + margin * se)

    assert worst is not None
    counts = {v.value: verdicts.count(v) for v in Verdict}
    return McReport(
        check="directional_mgf",
        spec=spec,
        seed=seed,
        samples=samples,
        statistic=worst[0],
        interval=(lower_end, upper_end),
        target=target,
        std_error=worst[1],
        details={
            "lambda": lam,
            "trials": trials,
            "directions": directions,
            "fail_margin": fail_margin,
            **counts,
        },
    )


def amgf_bound_check(
    spec: SamplerSpec,
    lam: float,
    samples: int,
    seed: int,
    config: MonteCarloConfig = DEFAULT_CONFIG,
) -> McReport:
    """
    Certify Φ_X(λ) <= e^{λ²σ²/2}.

    Samples X jointly with ℓ uniform on the sphere (u, v on both spheres for
    matrices). For Gaussian X at proxy = standard deviation the two sides
    are equal, so INCONCLUSIVE is the expected outcome there.
    """
    _check_count("samples", samples, MIN_SAMPLES)
    sigma = float(spec.variance_proxy)  # type: ignore[arg-type]
    target = 0.5 * (lam * sigma) ** 2

    def draw(rng: np.random.Generator, count: int) -> np.ndarray:
        X = draw_chunk(spec, rng, count)
        if spec.is_matrix:
            u = uniform_sphere(rng, count, int(spec.m))  # type: ignore[arg-type]
            v = uniform_sphere(rng, count, spec.n)
            return lam * np.einsum("bi,bij,bj->b", u, X, v)
        ell = uniform_sphere(rng, count, spec.n)
        return lam * np.sum(X * ell, axis=1)

    moments = log_mean_exp(draw, samples, seed, STREAM_SAMPLES, config)
    estimate, se = moments.log_mean, moments.std_error
    report = McReport(
        check="amgf_bound",
        spec=spec,
        seed=seed,
        samples=samples,
        statistic=estimate,
        interval=_interval(estimate, se, config.se_margin),
        target=target,
        std_error=se,
        details={"lambda": lam},
    )
    logger.info(
        f"AMGF check {spec.family.value} lambda={lam}: {estimate:.6g} vs {target:.6g} "
        f"-> {report.verdict.value}"
    )
    return report


def norm_mgf_check(
    spec: SamplerSpec,
    t: float,
    samples: int,
    seed: int,
    config: MonteCarloConfig = DEFAULT_CONFIG,
) -> McReport:
    """
    Certify an upper bound on log E e^{t‖X‖}.

    Vectors are checked against (√n + σt)²/2 - n/2. Matrices use the
    operator norm and the bound -((m+n)/2)·log(1-ε²) + σ²t²/(2ε⁴) at
    its optimal ε.

    Raises:
        DomainError: If t < 0
    """
    if not (t >= 0.0):
        raise DomainError("t", t, "must be >= 0")
    _check_count("samples", samples, MIN_SAMPLES)
    sigma = float(spec.variance_proxy)  # type: ignore[arg-type]
    details = {"t": t}
    if spec.is_matrix:
        m = int(spec.m)  # type: ignore[arg-type]
        target = 0.0
        if t > 0.0:
            eps, target = bounds.optimize_eps_matrix_norm_mgf(m, spec.n, sigma, t)
            details["eps_star"] = eps
    else:
        target = bounds.norm_mgf_exponent_min(spec.n, sigma, t)
        if t > 0.0:
            details["eps_star"] = bounds.optimal_eps_norm_mgf(spec.n, sigma, t)

    def draw(rng: np.random.Generator, count: int) -> np.ndarray:
        X = draw_chunk(spec, rng, count)
        if spec.is_matrix:
            return t * operator_norms(X, seed=seed)
        return t * np.linalg.norm(X, axis=1)

    moments = log_mean_exp(draw, samples, seed, STREAM_SAMPLES, config)
    estimate, se = moments.log_mean, moments.std_error
    report = McReport(
        check="norm_mgf",
        spec=spec,
        seed=seed,
        samples=samples,
        statistic=estimate,
        interval=_interval(estimate, se, config.se_margin),
        target=target,
        std_error=se,
        details=details,
    )
    logger.info(
        f"norm MGF check {spec.family.value} t={t}: {estimate:.6g} vs {target:.6g} "
        f"-> {report.verdict.value}"
    )
    return report


# ============================================================================
# Norms of samples
# ============================================================================

def _norm_chunks(spec: SamplerSpec, seed: int) -> Callable[[int, int], np.ndarray]:
    def norms(index: int, count: int) -> np.ndarray:
        X = draw_chunk(spec, substream(seed, STREAM_SAMPLES, index), count)
        if spec.is_matrix:
            return operator_norms(X, seed=seed, chunk=index)
        return np.linalg.norm(X, axis=1)

    return norms


def _check_consistent(spec: SamplerSpec, method: BoundMethod, params: BoundParams) -> None:
    proxy = float(spec.variance_proxy)  # type: ignore[arg-type]
    if not math.isclose(params.sigma, proxy, rel_tol=1e-9):
        raise SpecMismatchError(
            "sigma", params.sigma, f"sampler certifies variance proxy {spec.variance_proxy}"
        )
    if params.n != spec.n:
        raise SpecMismatchError("n", params.n, f"sampler has n={spec.n}")
    if method.is_matrix != spec.is_matrix:
        kind = "matrix" if spec.is_matrix else "vector"
        raise SpecMismatchError("method", method.value, f"not applicable to a {kind} sampler")
    if spec.is_matrix and params.m != spec.m:
        raise SpecMismatchError("m", params.m, f"sampler has m={spec.m}")


def coverage_experiment(
    spec: SamplerSpec,
    method: BoundMethod,
    params: BoundParams,
    samples: int,
    seed: int,
    config: MonteCarloConfig = DEFAULT_CONFIG,
) -> McReport:
    """
    Empirical coverage P(‖X‖ <= r) of a radius against its 1 - δ guarantee.

    The radius comes from `bounds.resolve_bound` (ε optimised when absent).
    Norms are Euclidean for vectors and operator norms for matrices. PASS
    iff the Clopper–Pearson lower bound is >= 1 - δ, FAIL if even the upper
    bound is below it.

    Raises:
        SpecMismatchError: If params do not describe the sampler
    """
    method = BoundMethod(method)
    _check_count("samples", samples, MIN_SAMPLES)
    _check_consistent(spec, method, params)
    result = bounds.resolve_bound(method, params)
    radius = result.radius
    norms = _norm_chunks(spec, seed)

    def covered(index: int, count: int) -> int:
        return int(np.count_nonzero(norms(index, count) <= radius))

    successes = sum(run_chunks(covered, samples, config))
    lower, upper = clopper_pearson(successes, samples, config.confidence)
    target = 1.0 - params.delta
    report = McReport(
        check="coverage",
        spec=spec,
        seed=seed,
        samples=samples,
        statistic=successes / samples,
        interval=(lower, upper),
        target=target,
        side=TargetSide.LOWER,
        details={
            "method": method.value,
            "radius": radius,
            "eps_used": result.eps_used,
            "successes": successes,
            "delta": params.delta,
        },
    )
    logger.info(
        f"coverage {spec.family.value} {method.value}: {successes}/{samples} "
        f"within r={radius:.6g}, "
        f"CP lower {lower:.6f} vs {target:.6f} -> {report.verdict.value}"
    )
    return report


def norm_quantile(
    spec: SamplerSpec,
    delta: float,
    samples: int,
    seed: int,
    config: MonteCarloConfig = DEFAULT_CONFIG,
) -> float:
    """
    Empirical (1-δ) quantile of ‖X‖.

    Uses the order statistic at 1-based index ⌈(1-δ)·samples⌉.
    """
    if not (0.0 < delta < 1.0):
        raise DomainError("delta", delta, "must lie in the open interval (0, 1)")
    _check_count("samples", samples, MIN_SAMPLES)
    values = np.concatenate(run_chunks(_norm_chunks(spec, seed), samples, config))
    rank = max(1, min(samples, math.ceil(round((1.0 - delta) * samples, 9))))
    return float(np.partition(values, rank - 1)[rank - 1])


# ============================================================================
# Matrix energy
# ============================================================================

def lemma4_certification(
    matrices: Sequence[np.ndarray],
    lam: float,
    eps_grid: Sequence[float],
    samples: int,
    seed: int,
    config: MonteCarloConfig = DEFAULT_CONFIG,
) -> List[McReport]:
    """
    Check log Φ_{m,n}(λA) >= ((m+n)/2)·log(1-ε²) + ε²‖λA‖ for each matrix.

    Each matrix gets its own derived seed. The target is the strongest
    bound over `eps_grid`; PASS means the estimate clears it by the SE
    margin.
    """
    if not eps_grid:
        raise DomainError("eps_grid", eps_grid, "needs at least one eps")
    reports: List[McReport] = []
    for i, A in enumerate(matrices):
        A = np.asarray(A, dtype=np.float64)
        if A.ndim != 2:
            raise DomainError("matrices", A.shape, "each entry must be a 2-D matrix")
        m, n = A.shape
        opnorm = operator_norm(A, seed=seed)
        z = abs(lam) * opnorm
        candidates = [(amgf.lemma4_lower_bound(m, n, z, e), e) for e in eps_grid]
        target, best_eps = max(candidates)
        estimate = amgf.mc_matrix_energy(m, n, A, lam, samples, derive_seed(seed, i), config)
        reports.append(
            McReport(
                check="lemma4",
                spec=None,
                seed=estimate.seed,
                samples=samples,
                statistic=estimate.log_estimate,
                interval=_interval(estimate.log_estimate, estimate.std_error, config.se_margin),
                target=target,
                side=TargetSide.LOWER,
                std_error=estimate.std_error,
                details={
                    "index": i,
                    "m": m,
                    "n": n,
                    "lambda": lam,
                    "opnorm": opnorm,
                    "eps": best_eps,
                    "chain": amgf.lemma4_chain(m, n, z, best_eps),
                },
            )
        )
    return reports
