"""ε-neighborhoods and the generator count that covers every row with high probability."""

import math
from typing import NamedTuple

import numpy as np
import numpy.typing as npt

from core.linalg import DEFAULT_NORM_GUARD, ArgumentError, DenseMatrix, as_matrix
from .types import parse_epsilon

# Machine epsilons of slack on the relative squared residual, so rows that are collinear
# up to rounding in their own precision still fit at ε = 0.
RESIDUAL_SLACK_EPS = 4

# Pair residuals are evaluated in blocks of at most this many scalars.
_BLOCK_SCALARS = 1 << 22

def residual_slack(dtype: npt.DTypeLike) -> float:
    """Slack added to ε² when comparing relative squared residuals for data of this dtype."""
    return RESIDUAL_SLACK_EPS * float(np.finfo(dtype).eps)

def fits_line(squared_residual: npt.ArrayLike, squared_norm: npt.ArrayLike, epsilon: float,
              dtype: npt.DTypeLike) -> npt.NDArray[np.bool_]:
    """
    The representative rule shared by compression and neighborhoods:
    ‖A_i − Ã_i‖² ≤ (ε² + slack)·‖A_i‖².
    """
    limit = (epsilon ** 2 + residual_slack(dtype)) * np.asarray(squared_norm)
    return np.asarray(squared_residual) <= limit

class FailureProbability(NamedTuple):
    """Probability that a uniform sample of k generators leaves some row uncovered."""

    worst_row: float
    union_bound: float
    exponential_bound: float

def neighborhood_matrix(a: DenseMatrix, epsilon: float,
                        norm_guard: float = DEFAULT_NORM_GUARD) -> npt.NDArray[np.bool_]:
    """
    Membership matrix M with M[i, j] true when row j can generate a valid representative
    for row i, i.e. ‖A_i − h(A_i, A_j)‖ ≤ ε‖A_i‖ with h the projection onto the line of A_j.

    Residuals are formed explicitly on unit rows in 64 bits; the rounding slack follows
    the precision A is given in, as in `apply_neighborhood_condition`. Zero candidate rows
    belong to no neighborhood, except that every row is a member of a zero row's
    neighborhood.
    """
    epsilon = parse_epsilon(epsilon)
    source = as_matrix(a, name="A")
    a = source.astype(np.float64)
    b, n = a.shape

    norms = np.linalg.norm(a, axis=1)
    valid = norms > norm_guard

    if math.isinf(epsilon):
        member = np.broadcast_to(valid[None, :], (b, b)).copy()
    else:
        unit = np.where(valid[:, None], a / np.where(valid, norms, 1.0)[:, None], 0.0)
        member = np.empty((b, b), dtype=bool)
        block = max(1, _BLOCK_SCALARS // (b * n))
        for start in range(0, b, block):
            rows = unit[start:start + block]
            cosines = rows @ unit.T
            residual = rows[:, None, :] - cosines[:, :, None] * unit[None, :, :]
            squared = np.einsum("ijk,ijk->ij", residual, residual)
            member[start:start + block] = fits_line(squared, 1.0, epsilon, source.dtype)
        member &= valid[None, :]

    member[~valid, :] = True
    np.fill_diagonal(member, True)
    return member

def epsilon_neighborhood_sizes(a: DenseMatrix, epsilon: float,
                               norm_guard: float = DEFAULT_NORM_GUARD
                               ) -> tuple[npt.NDArray[np.int64], int]:
    """
    Size of every row's ε-neighborhood and the smallest one, n_min.

    Brute force over all b² pairs.
    """
    sizes = neighborhood_matrix(a, epsilon, norm_guard).sum(axis=1).astype(np.int64)
    return sizes, int(sizes.min())

def k_bound(b: int, n_min: int, delta: float) -> int:
    """
    Smallest integer k > (b / n_min)·ln(b / δ).

    With that many uniformly sampled generators every row is covered with probability
    greater than 1 − δ.
    """
    if not 0 < delta < 1:
        raise ArgumentError(f"delta must be in (0, 1), got {delta}", "k_bound")
    if n_min < 1 or b < 1:
        raise ArgumentError(f"b and n_min must be positive, got b={b}, n_min={n_min}", "k_bound")
    return math.floor(b / n_min * math.log(b / delta)) + 1

def coverage_failure_probability(b: int, sizes: npt.ArrayLike, k: int) -> FailureProbability:
    """
    Exact and relaxed probabilities that some row gets no generator from its neighborhood.

    A row with neighborhood size s is uncovered with probability
    C(b − s, k) / C(b, k) = Π_{t<k} (1 − s / (b − t)).

    :param b: Number of rows.
    :param sizes: Neighborhood size of every row.
    :param k: Number of generators sampled without replacement.
    """
    if not 1 <= k <= b:
        raise ArgumentError(f"k must be in [1, {b}], got {k}", "coverage_failure_probability")

    sizes = np.asarray(sizes, dtype=np.int64)
    distinct, counts = np.unique(sizes, return_counts=True)
    remaining = b - np.arange(k, dtype=np.float64)

    per_size = np.empty(distinct.size)
    for idx, size in enumerate(distinct):
        factors = 1.0 - size / remaining
        per_size[idx] = 0.0 if np.any(factors <= 0) else float(np.prod(factors))

    n_min = int(sizes.min())
    return FailureProbability(
        worst_row=float(per_size.max()),
        union_bound=float(min(1.0, np.dot(per_size, counts))),
        exponential_bound=float(b * math.exp(-k * n_min / b)),
    )
