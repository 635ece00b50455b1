"""
Operator Norms
==============

Largest singular value by power iteration on the Gram matrix, vectorised
over stacks of matrices.

The iteration runs on B = AᵀA (or AAᵀ when that is smaller), normalised to
unit trace. For the first MAX_SQUARINGS steps the iterated operator is also
squared, so step k applies B^(2^k); this keeps matrices with nearly equal
top singular values within the iteration cap. Convergence is judged on the
residual ‖Bx - λx‖ <= tol·λ of the Rayleigh quotient λ = xᵀBx, and the
norm is √λ.
"""

import logging

import numpy as np

from concbounds.exceptions import ConvergenceError, DomainError
from concbounds.streams import STREAM_POWER_START, substream

logger = logging.getLogger(__name__)

POWER_TOL = 1e-12
MAX_POWER_ITERATIONS = 10_000
MAX_SQUARINGS = 60


def operator_norms(
    batch: np.ndarray,
    seed: int = 0,
    chunk: int = 0,
    tol: float = POWER_TOL,
    max_iterations: int = MAX_POWER_ITERATIONS,
) -> np.ndarray:
    """
    Operator norms ‖A‖ = σ₁(A) of every matrix in a (count, m, n) stack.

    Args:
        batch: Stack of real matrices
        seed: Seed for the random start vectors
        chunk: Chunk index, so each chunk of an experiment gets its own starts
        tol: Relative residual tolerance
        max_iterations: Iteration cap

    Returns:
        Array of shape (count,); zero matrices give exactly 0

    Raises:
        DomainError: If the stack is not 3-D or has non-finite entries
        ConvergenceError: If any matrix misses the tolerance within the cap
    """
    A = np.asarray(batch, dtype=np.float64)
    if A.ndim != 3:
        raise DomainError("batch", A.shape, "expected a (count, m, n) stack")
    if not np.all(np.isfinite(A)):
        raise DomainError("batch", "matrix", "entries must be finite")

    count, m, n = A.shape
    At = np.swapaxes(A, 1, 2)
    B = At @ A if m >= n else A @ At
    k = B.shape[1]

    out = np.zeros(count)
    trace = np.trace(B, axis1=1, axis2=2)
    live = trace > 0.0
    if not np.any(live):
        return out
    B = B[live]
    P = B / trace[live][:, None, None]

    x = substream(seed, STREAM_POWER_START, chunk).standard_normal((B.shape[0], k))
    x /= np.linalg.norm(x, axis=1, keepdims=True)

    gap = np.full(B.shape[0], np.inf)
    for iteration in range(1, max_iterations + 1):
        y = np.einsum("bij,bj->bi", P, x)
        norms = np.linalg.norm(y, axis=1)
        dead = norms == 0.0
        if np.any(dead):
            # Start fell in the null space; restart from the heaviest column
            cols = np.argmax(np.diagonal(P[dead], axis1=1, axis2=2), axis=1)
            y[dead] = P[dead][np.arange(cols.size), :, cols]
            norms[dead] = np.linalg.norm(y[dead], axis=1)
        x = y / norms[:, None]

        Bx = np.einsum("bij,bj->bi", B, x)
        lam = np.sum(x * Bx, axis=1)
        residual = np.linalg.norm(Bx - lam[:, None] * x, axis=1)
        gap = np.where(lam > 0.0, residual / np.where(lam > 0.0, lam, 1.0), np.inf)
        if np.all(gap <= tol):
            out[live] = np.sqrt(lam)
            logger.debug(f"operator_norms: {count} matrices converged in {iteration} iterations")
            return out

        if iteration <= MAX_SQUARINGS:
            P = P @ P
            P /= np.trace(P, axis1=1, axis2=2)[:, None, None]

    raise ConvergenceError(
        "operator_norm",
        max_iterations,
        float(np.max(gap)),
        f"{int(np.sum(gap > tol))} of {count} matrices unconverged",
    )


def operator_norm(
    A: np.ndarray,
    seed: int = 0,
    tol: float = POWER_TOL,
    max_iterations: int = MAX_POWER_ITERATIONS,
) -> float:
    """
    Operator norm of a single m×n matrix.

    Example:
        >>> operator_norm(np.eye(2))
        1.0
    """
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2:
        raise DomainError("A", A.shape, "expected a 2-D matrix")
    norms = operator_norms(A[None, :, :], seed=seed, tol=tol, max_iterations=max_iterations)
    return float(norms[0])
