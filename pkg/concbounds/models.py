"""
Conc-Bounds Data Models
=======================

Dataclasses and enums shared by the numerical modules, the Monte Carlo
harness and the command line. Validation happens on construction so every
downstream routine can assume well-formed inputs.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional, Tuple

from concbounds.exceptions import DomainError


# ============================================================================
# Enums
# ============================================================================

class PhiMethod(str, Enum):
    """How a log φₙ value was obtained."""
    CLOSED_FORM_HYPERBOLIC = "closed_form_hyperbolic"
    RATIO_QUADRATURE = "ratio_quadrature"
    SERIES = "series"


class BoundMethod(str, Enum):
    """Concentration-radius calculators."""
    SCALAR = "scalar"
    EPS_NET = "eps_net"
    THM2 = "thm2"
    THM3 = "thm3"
    HKZ = "hkz"
    MATRIX_THM4 = "matrix_thm4"

    @property
    def needs_eps(self) -> bool:
        return self in (BoundMethod.EPS_NET, BoundMethod.THM2, BoundMethod.MATRIX_THM4)

    @property
    def is_matrix(self) -> bool:
        return self is BoundMethod.MATRIX_THM4


class SamplerFamily(str, Enum):
    """Distribution families with a certified variance proxy."""
    GAUSSIAN_VECTOR = "gaussian_vector"
    RADEMACHER_VECTOR = "rademacher_vector"
    BOUNDED_UNIFORM_VECTOR = "bounded_uniform_vector"
    GAUSSIAN_MATRIX = "gaussian_matrix"

    @property
    def is_matrix(self) -> bool:
        return self is SamplerFamily.GAUSSIAN_MATRIX


class Verdict(str, Enum):
    """Outcome of a statistical check."""
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


class TargetSide(str, Enum):
    """Which side of its target a certified statistic has to land on."""
    UPPER = "upper"
    LOWER = "lower"


def _check_open_unit(name: str, value: float) -> None:
    if not (0.0 < value < 1.0):
        raise DomainError(name, value, "must lie in the open interval (0, 1)")


def _check_dimension(name: str, value: int) -> None:
    if int(value) != value or value < 1:
        raise DomainError(name, value, "must be an integer >= 1")


# ============================================================================
# Special-function Models
# ============================================================================

@dataclass(frozen=True)
class BesselOrder:
    """Order ν of the modified Bessel function I_ν (ν >= -1/2)."""
    nu: float

    def __post_init__(self) -> None:
        if not self.nu >= -0.5:
            raise DomainError("nu", self.nu, "Bessel order must be >= -1/2")

    @classmethod
    def for_dimension(cls, n: int) -> "BesselOrder":
        """Order (n-2)/2 whose ratio is the derivative of log φₙ."""
        _check_dimension("n", n)
        return cls((n - 2) / 2.0)


@dataclass(frozen=True)
class RatioResult:
    """Value of I_{ν+1}(z)/I_ν(z) together with its continued-fraction trace."""
    value: float
    iterations: int
    converged: bool = True


# ============================================================================
# AMGF Models
# ============================================================================

@dataclass(frozen=True)
class PhiQuery:
    """Point (n, z) at which the energy function φₙ is evaluated; z = ‖λX‖."""
    n: int
    z: float

    def __post_init__(self) -> None:
        _check_dimension("n", self.n)
        if not (self.z >= 0.0) or math.isinf(self.z):
            raise DomainError("z", self.z, "must be finite and >= 0")


@dataclass(frozen=True)
class LogPhiResult:
    """log φₙ(z) and the evaluation path that produced it."""
    log_value: float
    method: PhiMethod

    @property
    def value(self) -> Optional[float]:
        """φₙ(z) itself, or None when it overflows double precision."""
        try:
            return math.exp(self.log_value)
        except OverflowError:
            return None


@dataclass(frozen=True)
class EnergyEstimate:
    """Monte Carlo estimate of log φₙ(z) (sphere average of e^{z·ℓ₁})."""
    n: int
    log_estimate: float
    std_error: float
    samples: int
    seed: int

    def within(self, reference: float, margin: float = 3.0) -> bool:
        """True if reference lies within margin standard errors of the estimate."""
        return abs(self.log_estimate - reference) <= margin * self.std_error

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "log_estimate": self.log_estimate,
            "std_error": self.std_error,
            "samples": self.samples,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class MatrixEnergyEstimate(EnergyEstimate):
    """Monte Carlo estimate of log Φ_{m,n}(λA) over u ∈ S^{m-1}, v ∈ S^{n-1}."""
    m: int

    def to_dict(self) -> Dict[str, Any]:
        data = super().to_dict()
        data["m"] = self.m
        return data


# ============================================================================
# Bound Models
# ============================================================================

@dataclass(frozen=True)
class BoundParams:
    """
    Parameters driving every radius calculator.

    Invariants:
    - sigma > 0, 0 < delta < 1
    - eps, if present, in (0, 1)
    - m present only for matrix bounds
    """
    n: int
    sigma: float
    delta: float
    m: Optional[int] = None
    eps: Optional[float] = None

    def __post_init__(self) -> None:
        _check_dimension("n", self.n)
        if self.m is not None:
            _check_dimension("m", self.m)
        if not (self.sigma > 0.0) or math.isinf(self.sigma):
            raise DomainError("sigma", self.sigma, "must be finite and > 0")
        _check_open_unit("delta", self.delta)
        if self.eps is not None:
            _check_open_unit("eps", self.eps)

    @property
    def log_inv_delta(self) -> float:
        """L = log(1/δ)."""
        return -math.log(self.delta)

    def with_eps(self, eps: Optional[float]) -> "BoundParams":
        return BoundParams(n=self.n, sigma=self.sigma, delta=self.delta, m=self.m, eps=eps)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"n": self.n, "sigma": self.sigma, "delta": self.delta}
        if self.m is not None:
            data["m"] = self.m
        if self.eps is not None:
            data["eps"] = self.eps
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "BoundParams":
        return cls(
            n=int(data["n"]),
            sigma=float(data["sigma"]),
            delta=float(data["delta"]),
            m=int(data["m"]) if data.get("m") is not None else None,
            eps=float(data["eps"]) if data.get("eps") is not None else None,
        )


@dataclass(frozen=True)
class BoundResult:
    """
    A certified radius r with P(‖X‖ <= r) >= 1 - delta.

    For methods with constants, radius² = σ²(C₁·dimension + C₂·log(1/δ)).
    """
    method: BoundMethod
    radius: float
    delta: float
    sigma: float
    dimension: int
    c1: Optional[float] = None
    c2: Optional[float] = None
    eps_used: Optional[float] = None

    @property
    def has_constants(self) -> bool:
        return self.c1 is not None and self.c2 is not None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "method": self.method.value,
            "radius": self.radius,
            "delta": self.delta,
            "sigma": self.sigma,
            "dimension": self.dimension,
            "c1": self.c1,
            "c2": self.c2,
            "eps_used": self.eps_used,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "BoundResult":
        return cls(
            method=BoundMethod(data["method"]),
            radius=float(data["radius"]),
            delta=float(data["delta"]),
            sigma=float(data["sigma"]),
            dimension=int(data["dimension"]),
            c1=data.get("c1"),
            c2=data.get("c2"),
            eps_used=data.get("eps_used"),
        )


# ============================================================================
# Monte Carlo Models
# ============================================================================

@dataclass(frozen=True)
class SamplerSpec:
    """
    A sub-Gaussian distribution we can sample, with its certified proxy.

    `scale` is σ for Gaussian families, the half-width a for bounded uniform
    coordinates and the coordinate magnitude for Rademacher. `variance_proxy`
    holds the σ of e^{λ²σ²/2} that Hoeffding's lemma (or Gaussianity)
    certifies; for every implemented family it equals `scale`.
    """
    family: SamplerFamily
    n: int
    scale: float = 1.0
    m: Optional[int] = None
    variance_proxy: Optional[float] = None

    def __post_init__(self) -> None:
        _check_dimension("n", self.n)
        if not (self.scale > 0.0) or math.isinf(self.scale):
            raise DomainError("scale", self.scale, "must be finite and > 0")
        if self.family.is_matrix:
            if self.m is None:
                raise DomainError("m", None, f"{self.family.value} requires a row count")
            _check_dimension("m", self.m)
        elif self.m is not None:
            raise DomainError("m", self.m, f"{self.family.value} is a vector family")

        certified = self.certified_proxy()
        if self.variance_proxy is None:
            object.__setattr__(self, "variance_proxy", certified)
        elif not math.isclose(self.variance_proxy, certified, rel_tol=1e-12):
            raise DomainError(
                "variance_proxy",
                self.variance_proxy,
                f"certified proxy for {self.family.value} with scale {self.scale} is {certified}",
            )

    def certified_proxy(self) -> float:
        # Gaussian: exact. Rademacher and [-a, a] uniform: Hoeffding's lemma.
        return float(self.scale)

    @property
    def is_matrix(self) -> bool:
        return self.family.is_matrix

    @property
    def shape(self) -> Tuple[int, ...]:
        if self.is_matrix:
            return (int(self.m), self.n)  # type: ignore[arg-type]
        return (self.n,)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "family": self.family.value,
            "n": self.n,
            "scale": self.scale,
            "variance_proxy": self.variance_proxy,
        }
        if self.m is not None:
            data["m"] = self.m
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SamplerSpec":
        return cls(
            family=SamplerFamily(data["family"]),
            n=int(data["n"]),
            scale=float(data.get("scale", 1.0)),
            m=int(data["m"]) if data.get("m") is not None else None,
            variance_proxy=data.get("variance_proxy"),
        )


@dataclass(frozen=True)
class McReport:
    """
    Outcome of one Monte Carlo certification.

    `interval` is (estimate - margin·SE, estimate + margin·SE) for MGF-type
    checks and the one-sided Clopper–Pearson (lower, upper) pair for coverage.
    `side` says whether the statistic must stay below the target (UPPER) or
    reach it (LOWER). `spec` is None for checks on a fixed matrix rather
    than a sampler.
    """
    check: str
    spec: Optional[SamplerSpec]
    seed: int
    samples: int
    statistic: float
    interval: Tuple[float, float]
    target: float
    side: TargetSide = TargetSide.UPPER
    std_error: Optional[float] = None
    details: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        lower, upper = self.interval
        if not lower <= upper:
            raise DomainError("interval", self.interval, "lower end exceeds upper end")
        object.__setattr__(self, "side", TargetSide(self.side))

    @property
    def verdict(self) -> Verdict:
        """
        PASS when the whole interval is on the right side of the target,
        FAIL when the whole interval is on the wrong side.
        """
        lower, upper = self.interval
        if self.side is TargetSide.UPPER:
            if upper <= self.target:
                return Verdict.PASS
            if lower > self.target:
                return Verdict.FAIL
        else:
            if lower >= self.target:
                return Verdict.PASS
            if upper < self.target:
                return Verdict.FAIL
        return Verdict.INCONCLUSIVE

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS

    def to_dict(self) -> Dict[str, Any]:
        return {
            "check": self.check,
            "spec": self.spec.to_dict() if self.spec is not None else None,
            "seed": self.seed,
            "samples": self.samples,
            "statistic": self.statistic,
            "interval": list(self.interval),
            "target": self.target,
            "side": self.side.value,
            "verdict": self.verdict.value,
            "std_error": self.std_error,
            "details": dict(self.details),
        }
