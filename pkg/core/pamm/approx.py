"""ApproxMM: contract B onto the generators, then multiply by Cᵀ."""

import numpy as np

from core.linalg import DenseMatrix, ShapeError, as_matrix
from .types import CompressedActivation

def contract(comp: CompressedActivation, b_matrix: DenseMatrix) -> DenseMatrix:
    """
    B̃ with row j = Σ_{i: f(i)=j} alpha[i]·B[i, :].

    :param comp: Compressed A.
    :param b_matrix: Matrix of shape (b, m).
    :return: Matrix of shape (k, m).
    """
    b_matrix = as_matrix(b_matrix, name="B")
    if b_matrix.shape[0] != comp.b:
        raise ShapeError("B must have one row per compressed row", "approx_matmul",
                         ((comp.b, comp.n), b_matrix.shape))

    dtype = np.result_type(comp.generators.dtype, b_matrix.dtype)
    contracted = np.zeros((comp.k, b_matrix.shape[1]), dtype=dtype)
    np.add.at(contracted, comp.assignments, comp.alpha[:, None] * b_matrix)
    return contracted

def approx_matmul(comp: CompressedActivation, b_matrix: DenseMatrix) -> DenseMatrix:
    """
    Approximate AᵀB from the compressed form of A.

    Computes β·CᵀB̃. When every row was dropped (β undefined) the estimate is the
    n×m zero matrix.

    :param comp: Compressed A, b×n.
    :param b_matrix: Matrix of shape (b, m).
    :return: Matrix of shape (n, m).
    """
    contracted = contract(comp, b_matrix)
    if comp.beta is None:
        return np.zeros((comp.n, contracted.shape[1]), dtype=contracted.dtype)

    product = comp.generators.T @ contracted
    if comp.beta != 1.0:
        product *= product.dtype.type(comp.beta)
    return product
