"""Compress: sample generators, assign every row to its best line, drop poor fits."""

import math

import numpy as np
import numpy.typing as npt

from core.linalg import (
    DEFAULT_NORM_GUARD,
    ArgumentError,
    DenseMatrix,
    SeededSampler,
    ShapeError,
    as_matrix,
    cosine_similarity_matrix,
    row_norms,
    sample_without_replacement,
)
from core.logger import get_logger
from .neighborhoods import fits_line
from .types import INFINITY, CompressedActivation, PammConfig, parse_epsilon

def assign_and_project(a: DenseMatrix, c: DenseMatrix,
                       norm_guard: float = DEFAULT_NORM_GUARD
                       ) -> tuple[npt.NDArray[np.int64], npt.NDArray[np.floating]]:
    """
    Pick the generator line closest to every row and project onto it.

    The closest line is the one with the largest absolute cosine similarity, ties going
    to the smallest generator index. The coefficient is the orthogonal projection
    coefficient ⟨A_i, C_f⟩ / ‖C_f‖², so antiparallel generators give negative alphas.

    :param a: Rows to represent, shape (b, n).
    :param c: Generators, shape (k, n), k >= 1.
    :param norm_guard: Rows and generators at or below this norm count as zero vectors.
    :return: Assignment f (b,) and coefficients alpha (b,).
    """
    a = as_matrix(a, name="A")
    c = as_matrix(c, dtype=a.dtype, name="C")
    if a.shape[1] != c.shape[1]:
        raise ShapeError("Column counts differ", "assign_and_project", (a.shape, c.shape))

    norms_a = row_norms(a)
    norms_c = row_norms(c)
    valid_c = norms_c > norm_guard

    score = np.abs(cosine_similarity_matrix(a, c, norm_guard))
    # Zero generators never win, not even against an orthogonal line.
    score[:, ~valid_c] = -1
    f = np.argmax(score, axis=1).astype(np.int64)

    dots = np.einsum("ij,ij->i", a, c[f])
    denom = np.where(valid_c[f], norms_c[f], 1) ** 2
    alpha = (dots / denom).astype(a.dtype)

    zero_rows = norms_a <= norm_guard
    alpha[zero_rows] = 0
    f[zero_rows] = 0
    alpha[~valid_c[f]] = 0
    return f, alpha

def apply_neighborhood_condition(a: DenseMatrix, c: DenseMatrix, f: npt.NDArray[np.int64],
                                 alpha: npt.NDArray[np.floating], epsilon: float,
                                 norm_guard: float = DEFAULT_NORM_GUARD
                                 ) -> tuple[npt.NDArray[np.floating], int]:
    """
    Drop rows whose representative is farther than ε‖A_i‖ from them.

    Squared distances get a few machine epsilons of slack in the precision of A, so
    rows collinear with their generator up to rounding survive ε = 0.

    Rows at or below the norm guard are never dropped. Rows whose assigned generator is a
    zero vector had no usable line at all and are dropped for every ε.

    :return: Coefficients with dropped rows zeroed, and the number of dropped rows.
    """
    epsilon = parse_epsilon(epsilon)
    a = as_matrix(a, name="A")
    c = as_matrix(c, dtype=a.dtype, name="C")

    norms_a = row_norms(a)
    live_rows = norms_a > norm_guard
    no_line = live_rows & (row_norms(c)[f] <= norm_guard)

    if math.isinf(epsilon):
        dropped = no_line
    else:
        residual = a - alpha[:, None] * c[f]
        squared = np.einsum("ij,ij->i", residual, residual)
        fits = fits_line(squared, norms_a ** 2, epsilon, a.dtype)
        dropped = live_rows & (no_line | ~fits)

    kept_alpha = alpha.copy()
    kept_alpha[dropped] = 0
    return kept_alpha, int(np.count_nonzero(dropped))

def compute_beta(b: int, eta: int) -> float | None:
    """
    Rescaling b / (b − η) for the approximate product.

    :return: The factor, or None when every row was dropped.
    """
    if not 0 <= eta <= b:
        raise ArgumentError(f"Dropped count {eta} outside [0, {b}]", "compute_beta")
    if eta == b:
        return None
    return b / (b - eta)

def _check_generator_indices(indices: npt.NDArray[np.int64], b: int):
    if indices.ndim != 1 or indices.size < 1:
        raise ArgumentError("Generator indices must be a non-empty list", "compress_with_generators")
    if indices.min() < 0 or indices.max() >= b:
        raise ArgumentError(f"Generator index out of range [0, {b})", "compress_with_generators")
    if np.unique(indices).size != indices.size:
        raise ArgumentError("Generator indices must be distinct", "compress_with_generators")

def compress_with_generators(a: DenseMatrix, generator_indices: npt.ArrayLike,
                             epsilon: float = INFINITY,
                             norm_guard: float = DEFAULT_NORM_GUARD,
                             seed: int = 0,
                             use_beta: bool = True) -> CompressedActivation:
    """
    Compress A using the given rows as generators.

    Same pipeline as `compress` without the sampling step.

    :param a: Matrix of shape (b, n).
    :param generator_indices: Distinct row indices of A, in generator order.
    :param epsilon: Neighborhood tolerance, `inf` disables the condition.
    :param norm_guard: Zero-vector threshold.
    :param seed: Recorded in the result.
    :param use_beta: When False, beta is fixed to 1.
    """
    a = as_matrix(a, name="A")
    epsilon = parse_epsilon(epsilon)
    b, n = a.shape

    indices = np.asarray(generator_indices, dtype=np.int64)
    _check_generator_indices(indices, b)

    c = a[indices].copy()
    f, alpha = assign_and_project(a, c, norm_guard)

    # A generator row is its own exact representative with coefficient 1.
    self_rows = row_norms(c) > norm_guard
    f[indices[self_rows]] = np.flatnonzero(self_rows)
    alpha[indices[self_rows]] = 1

    alpha, eta = apply_neighborhood_condition(a, c, f, alpha, epsilon, norm_guard)
    beta = compute_beta(b, eta) if use_beta else 1.0

    if beta is None:
        get_logger().warning("All %d rows dropped at epsilon=%s; product estimate is zero", b, epsilon)
    get_logger().debug("Compressed %dx%d with k=%d: eta=%d beta=%s", b, n, indices.size, eta, beta)

    return CompressedActivation(
        generators=c,
        assignments=f,
        alpha=alpha,
        beta=beta,
        b=b,
        n=n,
        k=int(indices.size),
        eta=eta,
        epsilon=epsilon,
        seed=seed,
        norm_guard=norm_guard,
    )

def sample_generators(b: int, cfg: PammConfig) -> npt.NDArray[np.int64]:
    """Generator indices `compress` uses for a matrix with b rows."""
    k = cfg.effective_k(b)
    if k > b:
        raise ArgumentError(f"k={k} exceeds the number of rows b={b}", "compress")
    return sample_without_replacement(SeededSampler(cfg.seed), b, k)

def compress(a: DenseMatrix, cfg: PammConfig) -> CompressedActivation:
    """
    Compress A into generators, assignments and coefficients.

    :param a: Matrix of shape (b, n), b >= 1.
    :param cfg: Generator count, tolerance and seed.
    :return: The compressed activation.
    """
    a = as_matrix(a, name="A")
    indices = sample_generators(a.shape[0], cfg)
    return compress_with_generators(a, indices, cfg.epsilon, cfg.norm_guard, cfg.seed, cfg.use_beta)

def reconstruct(comp: CompressedActivation) -> DenseMatrix:
    """Representatives Ã with row i = alpha[i]·C[f[i]]; β is not applied."""
    return comp.alpha[:, None] * comp.generators[comp.assignments]
