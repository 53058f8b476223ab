"""Synthetic activation matrices and per-trial seeds."""

from enum import StrEnum

import numpy as np
import numpy.typing as npt

from core.linalg import ArgumentError, DenseMatrix

class DataSource(StrEnum):
    """Where an experiment takes its A matrix from."""
    GAUSSIAN = "synthetic-gaussian"
    CLUSTERED = "synthetic-clustered"
    FILE = "matrix-file"

def trial_seed(seed: int, trial: int) -> int:
    """Independent 64-bit seed for one trial of an experiment."""
    state = np.random.SeedSequence([seed, trial]).generate_state(1, dtype=np.uint64)
    return int(state[0])

def generate_gaussian_data(b: int, n: int, seed: int, dtype: npt.DTypeLike = np.float64) -> DenseMatrix:
    """b×n matrix with independent standard normal entries."""
    if b < 1 or n < 1:
        raise ArgumentError(f"Matrix sizes must be positive, got {b}x{n}", "generate_gaussian_data")
    return np.random.default_rng(seed).standard_normal((b, n)).astype(dtype)

def generate_clustered_data(b: int, n: int, clusters: int, spread: float, seed: int,
                            dtype: npt.DTypeLike = np.float64) -> DenseMatrix:
    """
    Rows gathered around a few random directions.

    Every row is a random unit cluster center scaled by a magnitude drawn from U[0.5, 2],
    plus Gaussian noise whose norm is about `spread` times that magnitude. Cluster sizes
    differ by at most one and the rows are shuffled.

    :param b: Number of rows.
    :param n: Number of columns.
    :param clusters: Number of cluster centers, at most b.
    :param spread: Relative noise level; 0 makes every row collinear with its center.
    :param seed: Generator seed.
    :param dtype: Output precision.
    """
    if b < 1 or n < 1:
        raise ArgumentError(f"Matrix sizes must be positive, got {b}x{n}", "generate_clustered_data")
    if not 1 <= clusters <= b:
        raise ArgumentError(f"clusters must be in [1, {b}], got {clusters}", "generate_clustered_data")
    if spread < 0:
        raise ArgumentError(f"spread must be non-negative, got {spread}", "generate_clustered_data")

    rng = np.random.default_rng(seed)
    centers = rng.standard_normal((clusters, n))
    centers /= np.linalg.norm(centers, axis=1, keepdims=True)

    labels = rng.permutation(np.arange(b) % clusters)
    magnitudes = rng.uniform(0.5, 2.0, size=b)

    rows = centers[labels]
    if spread > 0:
        rows = rows + rng.standard_normal((b, n)) * (spread / np.sqrt(n))
    return (magnitudes[:, None] * rows).astype(dtype)

def generate_correlated_pair(b: int, n: int, m: int, seed: int) -> tuple[DenseMatrix, DenseMatrix]:
    """
    Gaussian A (b×n) and B = AR + noise (b×m).

    B depends on A, so AᵀB carries signal instead of being dominated by cancellation.
    """
    if min(b, n, m) < 1:
        raise ArgumentError(f"Matrix sizes must be positive, got {b}x{n}, {b}x{m}", "generate_correlated_pair")
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((b, n))
    b_matrix = a @ rng.standard_normal((n, m)) + rng.standard_normal((b, m))
    return a, b_matrix
