"""
Conc-Bounds
===========

Norm concentration bounds for sub-Gaussian random vectors and matrices,
derived from the averaged moment generating function (AMGF).

This library provides:
- Overflow-free evaluation of the energy function log φₙ(z)
- Radius and tail calculators (ε-net, AMGF, ε-free and matrix bounds)
- ε optimisation and side-by-side method comparison
- A seeded, reproducible Monte Carlo harness certifying every bound

Quick Start:
    >>> from concbounds import BoundMethod, BoundParams, resolve_bound, log_phi, PhiQuery
    >>> log_phi(PhiQuery(n=3, z=2.0)).log_value
    0.5952...
    >>> p = BoundParams(n=10, sigma=1.0, delta=0.01)
    >>> r = resolve_bound(BoundMethod.THM3, p).radius   # √10 + √(2 ln 100)

Command line:
    $ conc-bounds bound vector --method all --n 10 --sigma 1 --delta 0.01
"""

from concbounds.exceptions import (
    ConcBoundsError,
    ConvergenceError,
    DimensionMismatchError,
    DomainError,
    QuadratureError,
    SpecMismatchError,
    UsageError,
)
from concbounds.models import (
    BesselOrder,
    BoundMethod,
    BoundParams,
    BoundResult,
    EnergyEstimate,
    LogPhiResult,
    MatrixEnergyEstimate,
    McReport,
    PhiMethod,
    PhiQuery,
    RatioResult,
    SamplerFamily,
    SamplerSpec,
    TargetSide,
    Verdict,
)
from concbounds.specfun import (
    amos_lower_bound,
    bessel_ratio,
    big_g,
    chi_square_cdf,
    chi_square_quantile,
    regularized_lower_incomplete_gamma,
)
from concbounds.amgf import (
    lemma1_lower_bound,
    lemma4_lower_bound,
    log_phi,
    log_phi_path,
    mc_matrix_energy,
    mc_phi,
)
from concbounds.bounds import (
    compare_methods,
    eps_net_constants,
    optimize_eps_matrix,
    optimize_eps_thm2,
    radius_eps_net,
    radius_hkz,
    radius_matrix_thm4,
    radius_scalar,
    radius_thm2,
    radius_thm3,
    resolve_bound,
    tail_delta_thm2,
)
from concbounds.streams import MonteCarloConfig

__version__ = "1.0.0"

__all__ = [
    # Exceptions
    "ConcBoundsError",
    "ConvergenceError",
    "DimensionMismatchError",
    "DomainError",
    "QuadratureError",
    "SpecMismatchError",
    "UsageError",
    # Models
    "BesselOrder",
    "BoundMethod",
    "BoundParams",
    "BoundResult",
    "EnergyEstimate",
    "LogPhiResult",
    "MatrixEnergyEstimate",
    "McReport",
    "PhiMethod",
    "PhiQuery",
    "RatioResult",
    "SamplerFamily",
    "SamplerSpec",
    "TargetSide",
    "Verdict",
    # Special functions
    "amos_lower_bound",
    "bessel_ratio",
    "big_g",
    "chi_square_cdf",
    "chi_square_quantile",
    "regularized_lower_incomplete_gamma",
    # AMGF
    "lemma1_lower_bound",
    "lemma4_lower_bound",
    "log_phi",
    "log_phi_path",
    "mc_matrix_energy",
    "mc_phi",
    # Bounds
    "compare_methods",
    "eps_net_constants",
    "optimize_eps_matrix",
    "optimize_eps_thm2",
    "radius_eps_net",
    "radius_hkz",
    "radius_matrix_thm4",
    "radius_scalar",
    "radius_thm2",
    "radius_thm3",
    "resolve_bound",
    "tail_delta_thm2",
    # Config
    "MonteCarloConfig",
    "__version__",
]
