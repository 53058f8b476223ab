"""Error metrics and the submultiplicativity bound."""

import dataclasses
import math

import numpy as np

from core.linalg import (
    ArgumentError,
    DenseMatrix,
    ShapeError,
    as_matrix,
    frobenius_norm,
    matmul_oracle,
    spectral_norm,
)
from .approx import approx_matmul
from .exceptions import UndefinedMetricError
from .types import CompressedActivation, PammErrorReport

def relative_error(exact: DenseMatrix, approx: DenseMatrix) -> float:
    """
    ‖O − Õ‖_F / ‖O‖_F, accumulated in 64 bits.

    :raises UndefinedMetricError: If the exact product is the zero matrix.
    """
    exact = as_matrix(exact, dtype=np.float64, name="O")
    approx = as_matrix(approx, dtype=np.float64, name="O_approx")
    if exact.shape != approx.shape:
        raise ShapeError("Products differ in shape", "relative_error", (exact.shape, approx.shape))

    exact_norm = frobenius_norm(exact)
    if exact_norm == 0:
        raise UndefinedMetricError("Exact product has zero norm", "relative_error")
    return frobenius_norm(exact - approx) / exact_norm

def error_bound_rhs(a: DenseMatrix, comp: CompressedActivation, b_matrix: DenseMatrix) -> float:
    """
    ‖B‖₂²·(ε²‖A_I‖_F² + ‖A_Ī‖_F²) for the un-normalised product.

    I are the rows with a non-zero representative, Ī the rest. The bound covers
    ‖AᵀB − ÃᵀB‖_F², so `comp` must carry β = 1.

    :raises ArgumentError: For ε = ∞ (vacuous) or β ≠ 1.
    """
    if math.isinf(comp.epsilon):
        raise ArgumentError("Error bound is vacuous for infinite epsilon", "error_bound_rhs")
    if comp.beta != 1.0:
        raise ArgumentError("Error bound holds for beta = 1; compress with use_beta=False",
                            "error_bound_rhs")

    a = as_matrix(a, dtype=np.float64, name="A")
    if a.shape != (comp.b, comp.n):
        raise ShapeError("A does not match the compressed shape", "error_bound_rhs",
                         (a.shape, (comp.b, comp.n)))

    squared_norms = np.einsum("ij,ij->i", a, a)
    kept = comp.kept_mask
    spectral = spectral_norm(b_matrix).value
    return spectral ** 2 * (comp.epsilon ** 2 * squared_norms[kept].sum() + squared_norms[~kept].sum())

def error_report(a: DenseMatrix, comp: CompressedActivation, b_matrix: DenseMatrix) -> PammErrorReport:
    """Relative error, coverage, drop count and (finite ε) bound for one compression."""
    exact = matmul_oracle(a, b_matrix)
    approx = approx_matmul(comp, b_matrix)

    bound = None
    if not math.isinf(comp.epsilon):
        bound = error_bound_rhs(a, dataclasses.replace(comp, beta=1.0), b_matrix)

    return PammErrorReport(
        relative_error=relative_error(exact, approx),
        coverage=comp.coverage,
        eta=comp.eta,
        bound_rhs=bound,
        exact_norm=frobenius_norm(exact),
    )
