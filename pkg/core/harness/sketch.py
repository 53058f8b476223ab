"""Gaussian sketch of the hidden dimension, the baseline PAMM is compared against."""

from typing import NamedTuple

import numpy as np

from core.linalg import ArgumentError, DenseMatrix, ShapeError, as_matrix

class SketchResult(NamedTuple):
    """Approximate product and the number of scalars the sketch keeps."""

    approx: DenseMatrix
    stored_scalars: int

def gaussian_sketch_baseline(a: DenseMatrix, b_matrix: DenseMatrix, k: int, seed: int,
                             orthogonal: bool = False) -> SketchResult:
    """
    Approximate AᵀB through the sketch X̃ = AP.

    P is n×k with N(0, 1/k) entries, so E[PPᵀ] = I and P·(X̃ᵀB) is an unbiased
    estimate of AᵀB. Only the b×k sketch would be kept for backward.

    :param a: Matrix of shape (b, n).
    :param b_matrix: Matrix of shape (b, m).
    :param k: Sketch width, 1 <= k <= n.
    :param seed: Seed of P.
    :param orthogonal: Use orthonormal columns instead; with k = n the product is exact.
    """
    a = as_matrix(a, name="A")
    b_matrix = as_matrix(b_matrix, name="B")
    if a.shape[0] != b_matrix.shape[0]:
        raise ShapeError("Row counts differ", "gaussian_sketch_baseline", (a.shape, b_matrix.shape))

    n = a.shape[1]
    if not 1 <= k <= n:
        raise ArgumentError(f"Sketch width must be in [1, {n}], got {k}", "gaussian_sketch_baseline")

    rng = np.random.default_rng(seed)
    if orthogonal:
        p, _ = np.linalg.qr(rng.standard_normal((n, k)))
    else:
        p = rng.standard_normal((n, k)) / np.sqrt(k)
    p = p.astype(a.dtype)

    sketch = a @ p
    approx = p @ (sketch.T @ b_matrix)
    return SketchResult(approx, sketch.size)
