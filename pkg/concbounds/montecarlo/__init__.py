"""
Conc-Bounds Monte Carlo Harness
===============================

Seeded sub-Gaussian samplers, operator norms and the statistical
experiments that certify the MGF, AMGF and coverage inequalities.

Quick Start:
    >>> from concbounds.models import BoundMethod, BoundParams, SamplerFamily, SamplerSpec
    >>> from concbounds.montecarlo import coverage_experiment
    >>>
    >>> spec = SamplerSpec(SamplerFamily.GAUSSIAN_VECTOR, n=10)
    >>> params = BoundParams(n=10, sigma=1.0, delta=0.01)
    >>> report = coverage_experiment(spec, BoundMethod.THM3, params, samples=100_000, seed=7)
    >>> report.verdict.value
    'pass'

Every experiment is bit-reproducible for a fixed (spec, seed, samples),
whatever `MonteCarloConfig.workers` is set to.
"""

from concbounds.montecarlo.samplers import draw_chunk, sample_batch
from concbounds.montecarlo.linalg import operator_norm, operator_norms
from concbounds.montecarlo.experiments import (
    amgf_bound_check,
    classify,
    clopper_pearson,
    combine_verdicts,
    coverage_experiment,
    directional_mgf_check,
    lemma4_certification,
    norm_mgf_check,
    norm_quantile,
    sidak_margin,
)

__all__ = [
    "draw_chunk",
    "sample_batch",
    "operator_norm",
    "operator_norms",
    "amgf_bound_check",
    "classify",
    "clopper_pearson",
    "combine_verdicts",
    "coverage_experiment",
    "directional_mgf_check",
    "lemma4_certification",
    "norm_mgf_check",
    "norm_quantile",
    "sidak_margin",
]
