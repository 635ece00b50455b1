"""
Sub-Gaussian Samplers
=====================

Seeded draws from the distribution families of `SamplerFamily`. Each
family's variance proxy is certified analytically (see SamplerSpec), not
estimated.
"""

import logging

import numpy as np

from concbounds.exceptions import DomainError
from concbounds.models import SamplerFamily, SamplerSpec
from concbounds.streams import (
    DEFAULT_CONFIG,
    STREAM_SAMPLES,
    MonteCarloConfig,
    run_chunks,
    substream,
)

logger = logging.getLogger(__name__)


def draw_chunk(spec: SamplerSpec, rng: np.random.Generator, count: int) -> np.ndarray:
    """
    Draw `count` realisations of X from `rng`.

    Returns:
        Array of shape (count, n) for vector families, (count, m, n) for matrices
    """
    if count < 1:
        raise DomainError("count", count, "must be >= 1")
    shape = (count, *spec.shape)
    family = spec.family

    if family in (SamplerFamily.GAUSSIAN_VECTOR, SamplerFamily.GAUSSIAN_MATRIX):
        return rng.normal(0.0, spec.scale, size=shape)
    if family is SamplerFamily.RADEMACHER_VECTOR:
        signs = rng.integers(0, 2, size=shape, dtype=np.int8)
        return spec.scale * (2.0 * signs - 1.0)
    if family is SamplerFamily.BOUNDED_UNIFORM_VECTOR:
        return rng.uniform(-spec.scale, spec.scale, size=shape)

    raise DomainError("family", family, "no sampler for this family")


def sample_batch(
    spec: SamplerSpec,
    count: int,
    seed: int,
    config: MonteCarloConfig = DEFAULT_CONFIG,
) -> np.ndarray:
    """
    `count` realisations of X, deterministic given (spec, seed, count).

    Chunk i comes from substream (seed, samples stream, i), the same draws
    the coverage experiment sees, so a batch can be inspected offline.

    Example:
        >>> spec = SamplerSpec(SamplerFamily.RADEMACHER_VECTOR, n=4)
        >>> batch = sample_batch(spec, 1000, seed=7)
        >>> batch.shape
        (1000, 4)
    """

    def chunk(index: int, size: int) -> np.ndarray:
        return draw_chunk(spec, substream(seed, STREAM_SAMPLES, index), size)

    batch = np.concatenate(run_chunks(chunk, count, config), axis=0)
    logger.debug(f"sampled {count} x {spec.family.value}{spec.shape} seed={seed}")
    return batch
