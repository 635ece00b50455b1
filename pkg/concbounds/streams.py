"""
Deterministic Monte Carlo Streams
=================================

Substream random generators and order-fixed reductions shared by the AMGF
estimators and the Monte Carlo harness.

Determinism contract:
- samples are processed in chunks of a fixed size (65,536 by default)
- chunk i of stream s under seed k draws from a Philox generator keyed by
  SeedSequence(k, spawn_key=(s, i)), independent of which worker runs it
- chunk results are combined by a pairwise tree in chunk order

so results are bit-identical for a given (seed, samples) whatever the
worker count.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple, TypeVar

import numpy as np

from concbounds.exceptions import DomainError

logger = logging.getLogger(__name__)

T = TypeVar("T")

CHUNK_SIZE = 65_536

# Stream identifiers; one per independent source of randomness in an experiment
STREAM_SPHERE = 0
STREAM_SAMPLES = 2
STREAM_DIRECTIONS = 3
STREAM_POWER_START = 4


@dataclass(frozen=True)
class MonteCarloConfig:
    """
    Knobs for the Monte Carlo harness.

    Args:
        chunk_size: Samples per substream chunk (part of the determinism contract)
        workers: Threads used to run chunks; never changes results
        se_margin: Standard errors allowed between estimate and bound
        confidence: One-sided Clopper–Pearson confidence level
    """
    chunk_size: int = CHUNK_SIZE
    workers: int = 1
    se_margin: float = 3.0
    confidence: float = 0.999

    def __post_init__(self) -> None:
        if self.chunk_size < 1:
            raise DomainError("chunk_size", self.chunk_size, "must be >= 1")
        if self.workers < 1:
            raise DomainError("workers", self.workers, "must be >= 1")
        if not self.se_margin > 0.0:
            raise DomainError("se_margin", self.se_margin, "must be > 0")
        if not (0.5 < self.confidence < 1.0):
            raise DomainError("confidence", self.confidence, "must lie in (0.5, 1)")


DEFAULT_CONFIG = MonteCarloConfig()


def substream(
    seed: int,
    stream: int,
    index: int,
    path: Tuple[int, ...] = (),
) -> np.random.Generator:
    """
    Counter-based generator for chunk `index` of `stream` under `seed`.

    `path` names a sub-experiment (a direction, a trial) so that repeated
    estimates inside one experiment never share draws.
    """
    if seed < 0:
        raise DomainError("seed", seed, "must be an unsigned integer")
    sequence = np.random.SeedSequence(seed, spawn_key=(stream, *path, index))
    return np.random.Generator(np.random.Philox(sequence))


def derive_seed(seed: int, *path: int) -> int:
    """A child seed for an independent experiment nested under `seed`."""
    if seed < 0:
        raise DomainError("seed", seed, "must be an unsigned integer")
    state = np.random.SeedSequence(seed, spawn_key=path).generate_state(1, np.uint64)
    return int(state[0])


def chunk_counts(samples: int, chunk_size: int = CHUNK_SIZE) -> List[int]:
    """Split `samples` into full chunks plus a remainder."""
    if samples < 1:
        raise DomainError("samples", samples, "must be >= 1")
    full, rest = divmod(samples, chunk_size)
    return [chunk_size] * full + ([rest] if rest else [])


def pairwise_reduce(items: Sequence[T], merge: Callable[[T, T], T]) -> T:
    """Combine items with a balanced binary tree in their given order."""
    if not items:
        raise DomainError("items", items, "nothing to reduce")
    if len(items) == 1:
        return items[0]
    mid = len(items) // 2
    return merge(pairwise_reduce(items[:mid], merge), pairwise_reduce(items[mid:], merge))


def run_chunks(
    task: Callable[[int, int], T],
    samples: int,
    config: MonteCarloConfig = DEFAULT_CONFIG,
) -> List[T]:
    """
    Run task(chunk_index, chunk_count) for every chunk, results in chunk order.

    numpy releases the GIL inside its kernels, so a thread pool gives real
    parallelism for the vectorised chunk bodies.
    """
    counts = chunk_counts(samples, config.chunk_size)
    if config.workers == 1 or len(counts) == 1:
        return [task(i, c) for i, c in enumerate(counts)]
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        return list(pool.map(task, range(len(counts)), counts))


# ============================================================================
# Log-domain moment accumulation
# ============================================================================

@dataclass(frozen=True)
class LogMoments:
    """
    Shifted power sums of w = e^x for a batch of exponents x.

    Stores shift = max x, s1 = Σ e^{x-shift}, s2 = Σ e^{2(x-shift)} and the
    count, so the mean of e^x and its delta-method standard error in log
    domain never overflow.
    """
    shift: float
    s1: float
    s2: float
    count: int

    @classmethod
    def from_exponents(cls, x: np.ndarray) -> "LogMoments":
        x = np.asarray(x, dtype=np.float64).ravel()
        if x.size == 0:
            raise DomainError("x", x.shape, "empty batch")
        shift = float(np.max(x))
        w = np.exp(x - shift)
        return cls(shift=shift, s1=float(np.sum(w)), s2=float(np.sum(w * w)), count=int(x.size))

    def merge(self, other: "LogMoments") -> "LogMoments":
        shift = max(self.shift, other.shift)
        a = math.exp(self.shift - shift)
        b = math.exp(other.shift - shift)
        return LogMoments(
            shift=shift,
            s1=self.s1 * a + other.s1 * b,
            s2=self.s2 * a * a + other.s2 * b * b,
            count=self.count + other.count,
        )

    @property
    def log_mean(self) -> float:
        """log of the sample mean of e^x."""
        return self.shift + math.log(self.s1) - math.log(self.count)

    @property
    def std_error(self) -> float:
        """Delta-method standard error of log_mean: sd(w) / (mean(w)·√N)."""
        ratio = self.count * self.s2 / (self.s1 * self.s1)
        return math.sqrt(max(ratio - 1.0, 0.0) / self.count)


def log_mean_exp(
    draw: Callable[[np.random.Generator, int], np.ndarray],
    samples: int,
    seed: int,
    stream: int = STREAM_SAMPLES,
    config: MonteCarloConfig = DEFAULT_CONFIG,
    path: Tuple[int, ...] = (),
) -> LogMoments:
    """
    Estimate log E[e^x] where draw(rng, count) returns `count` exponents x.

    Each chunk draws from its own substream and is summarised as LogMoments;
    chunk summaries are merged pairwise.
    """

    def chunk(index: int, count: int) -> LogMoments:
        return LogMoments.from_exponents(draw(substream(seed, stream, index, path), count))

    moments = pairwise_reduce(run_chunks(chunk, samples, config), LogMoments.merge)
    logger.debug(
        f"log_mean_exp: seed={seed} samples={samples} "
        f"log_mean={moments.log_mean!r} se={moments.std_error!r}"
    )
    return moments


def uniform_sphere(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    """`count` points uniform on S^{dim-1}, by normalising standard Gaussians."""
    g = rng.standard_normal((count, dim))
    norms = np.linalg.norm(g, axis=1, keepdims=True)
    # A zero Gaussian vector has probability zero; map it to a fixed pole.
    zero = norms[:, 0] == 0.0
    if np.any(zero):
        g[zero] = 0.0
        g[zero, 0] = 1.0
        norms[zero] = 1.0
    return g / norms
