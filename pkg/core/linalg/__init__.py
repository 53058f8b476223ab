"""
Dense Linear Algebra Module

Row-major real matrices backed by numpy, exact products with 64-bit oracles,
norms, power-iteration spectral norm, cosine similarity matrices and
seeded sampling without replacement.
"""

from .exceptions import ArgumentError, FormatError, LinalgError, NumericError, ShapeError
from .matrix_io import MatrixDType, decode_matrix, encode_matrix, load_matrix, save_matrix
from .ops import (
    DEFAULT_NORM_GUARD,
    WORKING_DTYPE,
    DenseMatrix,
    SpectralEstimate,
    as_matrix,
    cosine_similarity_matrix,
    frobenius_norm,
    matmul,
    matmul_oracle,
    row_norms,
    spectral_norm,
)
from .sampling import SeededSampler, sample_without_replacement

__all__ = [
    'ArgumentError',
    'DEFAULT_NORM_GUARD',
    'DenseMatrix',
    'FormatError',
    'LinalgError',
    'MatrixDType',
    'NumericError',
    'SeededSampler',
    'ShapeError',
    'SpectralEstimate',
    'WORKING_DTYPE',
    'as_matrix',
    'cosine_similarity_matrix',
    'decode_matrix',
    'encode_matrix',
    'frobenius_norm',
    'load_matrix',
    'matmul',
    'matmul_oracle',
    'row_norms',
    'sample_without_replacement',
    'save_matrix',
    'spectral_norm',
]
