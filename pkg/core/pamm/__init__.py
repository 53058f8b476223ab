"""
PAMM Module

Point-approximate matrix multiplication: compress a b×n matrix A into k sampled
generator rows, per-row assignments and projection coefficients, then approximate
AᵀB from that compressed form. Also provides the error metrics, the submultiplicativity
bound, ε-neighborhood analysis and memory/arithmetic accounting.
"""

from .accounting import (
    MemoryFootprint,
    MultiplyCounts,
    memory_footprint,
    memory_footprint_for,
    multiply_counts,
    speedup_gamma,
)
from .approx import approx_matmul, contract
from .compressed_io import (
    COMPRESSED_MAGIC,
    decode_compressed,
    encode_compressed,
    load_compressed,
    save_compressed,
)
from .compression import (
    apply_neighborhood_condition,
    assign_and_project,
    compress,
    compress_with_generators,
    compute_beta,
    reconstruct,
    sample_generators,
)
from .exceptions import PammError, UndefinedMetricError
from .metrics import error_bound_rhs, error_report, relative_error
from .neighborhoods import (
    FailureProbability,
    coverage_failure_probability,
    epsilon_neighborhood_sizes,
    fits_line,
    k_bound,
    neighborhood_matrix,
    residual_slack,
)
from .types import (
    INFINITY,
    CompressedActivation,
    PammConfig,
    PammErrorReport,
    format_epsilon,
    parse_epsilon,
)

__all__ = [
    'COMPRESSED_MAGIC',
    'CompressedActivation',
    'FailureProbability',
    'INFINITY',
    'MemoryFootprint',
    'MultiplyCounts',
    'PammConfig',
    'PammError',
    'PammErrorReport',
    'UndefinedMetricError',
    'apply_neighborhood_condition',
    'approx_matmul',
    'assign_and_project',
    'compress',
    'compress_with_generators',
    'compute_beta',
    'contract',
    'coverage_failure_probability',
    'decode_compressed',
    'encode_compressed',
    'epsilon_neighborhood_sizes',
    'fits_line',
    'error_bound_rhs',
    'error_report',
    'format_epsilon',
    'k_bound',
    'load_compressed',
    'memory_footprint',
    'memory_footprint_for',
    'multiply_counts',
    'neighborhood_matrix',
    'parse_epsilon',
    'reconstruct',
    'relative_error',
    'residual_slack',
    'sample_generators',
    'save_compressed',
    'speedup_gamma',
]
