"""Memory and arithmetic accounting for compressed products."""

import math
from typing import NamedTuple

from core.linalg import ArgumentError
from .types import CompressedActivation

class MemoryFootprint(NamedTuple):
    """Scalars kept for the backward pass, compressed against dense."""

    compressed_scalars: int
    dense_scalars: int
    ratio: float

class MultiplyCounts(NamedTuple):
    """Scalar multiplications of the exact and the approximate product."""

    exact: int
    pamm: int

def _require_positive(operation: str, **values: int):
    for name, value in values.items():
        if value < 1:
            raise ArgumentError(f"{name} must be positive, got {value}", operation)

def memory_footprint_for(b: int, n: int, k: int) -> MemoryFootprint:
    """k·n generators plus b coefficients and b assignments, against b·n dense scalars."""
    _require_positive("memory_footprint", b=b, n=n, k=k)
    compressed = k * n + 2 * b
    dense = b * n
    return MemoryFootprint(compressed, dense, dense / compressed)

def memory_footprint(comp: CompressedActivation) -> MemoryFootprint:
    """Footprint of an existing compression."""
    return memory_footprint_for(comp.b, comp.n, comp.k)

def speedup_gamma(b: int, m: int, k: int) -> float:
    """Predicted speedup bm / (k(b + m)); above 1 the approximate product is cheaper."""
    _require_positive("speedup_gamma", b=b, m=m, k=k)
    return b * m / (k * (b + m))

def multiply_counts(b: int, n: int, m: int, k: int) -> MultiplyCounts:
    """
    Multiplications of AᵀB against compress-then-multiply.

    The approximate path pays for the b×k cosine matrix, the final CᵀB̃, the row norms,
    the α⊙B scaling and the argmax.
    """
    _require_positive("multiply_counts", b=b, n=n, m=m, k=k)
    argmax = b * math.ceil(math.log2(k)) if k > 1 else 0
    return MultiplyCounts(
        exact=b * n * m,
        pamm=b * k * n + k * n * m + b * n + b * m + argmax,
    )
