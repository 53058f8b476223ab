"""Dense matrix products, norms and similarity matrices."""

from typing import NamedTuple

import numpy as np
import numpy.typing as npt

from core.logger import get_logger
from .exceptions import ArgumentError, NumericError, ShapeError

DenseMatrix = npt.NDArray[np.floating]

WORKING_DTYPE = np.float32
ORACLE_DTYPE = np.float64

# Rows and generators with a norm at or below this are treated as zero vectors.
DEFAULT_NORM_GUARD = 1e-12

SPECTRAL_START_SEED = 0x5EED

class SpectralEstimate(NamedTuple):
    """Result of a power-iteration spectral norm estimate."""

    value: float
    iterations: int
    start_seed: int

def as_matrix(data: npt.ArrayLike, dtype: npt.DTypeLike | None = None,
              name: str = "matrix", allow_empty: bool = False) -> DenseMatrix:
    """
    Coerce input to a 2-D row-major real matrix.

    :param data: Anything numpy can turn into an array.
    :param dtype: Target dtype; keeps the input's floating dtype when None
                  (integers become working precision).
    :param name: Name used in error messages.
    :param allow_empty: Accept zero rows or columns.
    :return: A C-contiguous 2-D array.
    """
    array = np.asarray(data)
    if dtype is None:
        dtype = array.dtype if np.issubdtype(array.dtype, np.floating) else WORKING_DTYPE
    array = np.ascontiguousarray(array, dtype=dtype)

    if array.ndim != 2:
        raise ShapeError(f"{name} must be 2-D", "as_matrix", (array.shape,))
    if not allow_empty and (array.shape[0] < 1 or array.shape[1] < 1):
        raise ArgumentError(f"{name} must have at least one row and one column, got {array.shape}",
                            "as_matrix")
    return array

def _check_rows(a: DenseMatrix, b: DenseMatrix, operation: str):
    if a.shape[0] != b.shape[0]:
        raise ShapeError("Row counts differ", operation, (a.shape, b.shape))

def matmul(a: DenseMatrix, b: DenseMatrix) -> DenseMatrix:
    """
    Exact product AᵀB in the operands' common precision.

    :param a: Matrix of shape (b, n), used transposed.
    :param b: Matrix of shape (b, m).
    :return: Matrix of shape (n, m).
    """
    a = as_matrix(a, name="A")
    b = as_matrix(b, name="B")
    _check_rows(a, b, "matmul")
    return a.T @ b

def matmul_oracle(a: DenseMatrix, b: DenseMatrix) -> DenseMatrix:
    """AᵀB with 64-bit accumulation, for test baselines."""
    a = as_matrix(a, dtype=ORACLE_DTYPE, name="A")
    b = as_matrix(b, dtype=ORACLE_DTYPE, name="B")
    _check_rows(a, b, "matmul_oracle")
    return np.einsum("ij,ik->jk", a, b)

def row_norms(a: DenseMatrix) -> npt.NDArray[np.floating]:
    """Euclidean norm of every row."""
    a = as_matrix(a, name="A", allow_empty=True)
    return np.linalg.norm(a, axis=1)

def frobenius_norm(a: DenseMatrix) -> float:
    """Euclidean norm of all entries, accumulated in 64 bits."""
    a = as_matrix(a, name="A", allow_empty=True)
    return float(np.linalg.norm(a.astype(ORACLE_DTYPE, copy=False)))

def spectral_norm(b: DenseMatrix, max_iters: int = 1000, tol: float = 1e-10,
                  seed: int = SPECTRAL_START_SEED) -> SpectralEstimate:
    """
    Largest singular value of B by power iteration on BᵀB.

    The iteration runs in 64 bits from a seeded Gaussian start vector so the estimate
    is reproducible.

    :param b: Matrix of shape (rows, cols).
    :param max_iters: Upper bound on iterations, at least 1.
    :param tol: Stop when the relative change of the estimate drops below this.
    :param seed: Seed of the start vector, recorded in the result.
    :return: Estimate, iterations used and the start seed.
    """
    if max_iters < 1:
        raise ArgumentError(f"max_iters must be >= 1, got {max_iters}", "spectral_norm")

    b = as_matrix(b, dtype=ORACLE_DTYPE, name="B")
    if not np.all(np.isfinite(b)):
        raise NumericError("Matrix contains non-finite entries", "spectral_norm")

    rng = np.random.default_rng(seed)
    v = rng.standard_normal(b.shape[1])
    v /= np.linalg.norm(v)

    sigma = 0.0
    iterations = 0
    for iterations in range(1, max_iters + 1):
        u = b @ v
        w = b.T @ u
        w_norm = np.linalg.norm(w)
        if w_norm == 0.0:
            # v lies in the null space; for a zero matrix the norm is exactly zero.
            sigma = float(np.linalg.norm(u))
            break
        v = w / w_norm
        new_sigma = float(np.linalg.norm(b @ v))
        converged = abs(new_sigma - sigma) <= tol * new_sigma
        sigma = new_sigma
        if converged:
            break

    get_logger().debug("Spectral norm %.6g after %d iterations", sigma, iterations)
    return SpectralEstimate(sigma, iterations, seed)

def cosine_similarity_matrix(a: DenseMatrix, c: DenseMatrix,
                             norm_guard: float = DEFAULT_NORM_GUARD) -> DenseMatrix:
    """
    Cosine similarity between every row of A and every row of C.

    Entries involving a row whose norm is at or below `norm_guard` are 0.
    Other entries are clipped to [-1, 1].

    :param a: Matrix of shape (b, n).
    :param c: Matrix of shape (k, n).
    :param norm_guard: Norm threshold for zero vectors.
    :return: Matrix of shape (b, k).
    """
    a = as_matrix(a, name="A")
    c = as_matrix(c, name="C")
    if a.shape[1] != c.shape[1]:
        raise ShapeError("Column counts differ", "cosine_similarity_matrix", (a.shape, c.shape))

    norms_a = row_norms(a)
    norms_c = row_norms(c)
    valid_a = norms_a > norm_guard
    valid_c = norms_c > norm_guard

    denom = np.outer(np.where(valid_a, norms_a, 1), np.where(valid_c, norms_c, 1))
    csim = np.clip((a @ c.T) / denom, -1, 1)
    csim[~valid_a, :] = 0
    csim[:, ~valid_c] = 0
    return csim
