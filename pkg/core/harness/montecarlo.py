"""Monte-Carlo checks: full coverage at the k bound, and unbiasedness of the β estimator."""

import math
from typing import NamedTuple

import numpy as np

from core.linalg import (
    DEFAULT_NORM_GUARD,
    ArgumentError,
    DenseMatrix,
    SeededSampler,
    ShapeError,
    as_matrix,
    frobenius_norm,
    matmul_oracle,
    sample_without_replacement,
)
from core.logger import get_logger
from core.pamm import (
    FailureProbability,
    compress_with_generators,
    coverage_failure_probability,
    epsilon_neighborhood_sizes,
    k_bound,
    parse_epsilon,
)
from .data import trial_seed

MIN_KBOUND_TRIALS = 100
_MASK_CHUNK = 1024

class KBoundResult(NamedTuple):
    """Empirical and analytic coverage failure at the k bound."""

    b: int
    n: int
    epsilon: float
    delta: float
    n_min: int
    k: int
    clamped: bool
    failures: int
    trials: int
    analytic: FailureProbability

    @property
    def failure_rate(self) -> float:
        return self.failures / self.trials

def kbound_monte_carlo(a: DenseMatrix, epsilon: float, delta: float, trials: int,
                       seed: int = 0, norm_guard: float = DEFAULT_NORM_GUARD) -> KBoundResult:
    """
    Sample generators at k = k_bound(b, n_min, δ) and count how often a row is left without one.

    A trial fails when compressing with the sampled generators drops any row. When the
    bound reaches b, k is clamped to b, no trial is run and the failure count is 0.

    :param a: Matrix of shape (b, n).
    :param epsilon: Finite tolerance.
    :param delta: Target failure probability in (0, 1).
    :param trials: Independent generator samples, at least 100.
    :param seed: Base seed; trial t uses an independent derived seed.
    """
    epsilon = parse_epsilon(epsilon)
    if math.isinf(epsilon):
        raise ArgumentError("The k bound needs a finite epsilon", "kbound_monte_carlo")
    if trials < MIN_KBOUND_TRIALS:
        raise ArgumentError(f"Need at least {MIN_KBOUND_TRIALS} trials, got {trials}", "kbound_monte_carlo")

    a = as_matrix(a, dtype=np.float64, name="A")
    b, n = a.shape
    sizes, n_min = epsilon_neighborhood_sizes(a, epsilon, norm_guard)
    k = k_bound(b, n_min, delta)

    logger = get_logger()
    if k >= b:
        logger.warning("k bound %d is not below b=%d; using the full sample", k, b)
        return KBoundResult(b, n, epsilon, delta, n_min, b, True, 0, trials,
                            coverage_failure_probability(b, sizes, b))

    failures = 0
    for trial in range(trials):
        sampler = SeededSampler(trial_seed(seed, trial))
        indices = sample_without_replacement(sampler, b, k)
        comp = compress_with_generators(a, indices, epsilon, norm_guard, sampler.seed)
        failures += comp.eta > 0

    analytic = coverage_failure_probability(b, sizes, k)
    logger.info("k=%d (n_min=%d): %d/%d trials left a row uncovered, analytic union bound %.3g",
                k, n_min, failures, trials, analytic.union_bound)
    return KBoundResult(b, n, epsilon, delta, n_min, k, False, int(failures), trials, analytic)

class UnbiasednessResult(NamedTuple):
    """Deviation of the mean estimate and of a single estimate from the exact product."""

    mean_deviation: float
    single_trial_deviation: float
    keep_prob: float
    trials: int

def estimator_unbiasedness_mc(a: DenseMatrix, b_matrix: DenseMatrix, keep_prob: float,
                              trials: int, seed: int = 0) -> UnbiasednessResult:
    """
    Average the masked, rescaled estimate β·Σ M_i A_iᵀB_i over Bernoulli masks.

    Every row survives with probability `keep_prob` and β = 1 / keep_prob. The mean over
    trials reduces to Aᵀ diag(w) B with w_i the rescaled survival count of row i.

    :return: ‖mean − AᵀB‖_F / ‖AᵀB‖_F and the same for the first trial alone.
    """
    if not 0 < keep_prob <= 1:
        raise ArgumentError(f"keep_prob must be in (0, 1], got {keep_prob}", "estimator_unbiasedness_mc")
    if trials < 1:
        raise ArgumentError(f"trials must be at least 1, got {trials}", "estimator_unbiasedness_mc")

    a = as_matrix(a, dtype=np.float64, name="A")
    b_matrix = as_matrix(b_matrix, dtype=np.float64, name="B")
    if a.shape[0] != b_matrix.shape[0]:
        raise ShapeError("Row counts differ", "estimator_unbiasedness_mc", (a.shape, b_matrix.shape))

    rows = a.shape[0]
    rng = np.random.default_rng(seed)
    counts = np.zeros(rows, dtype=np.int64)
    first_mask = None
    done = 0
    while done < trials:
        chunk = min(_MASK_CHUNK, trials - done)
        masks = rng.random((chunk, rows)) < keep_prob
        if first_mask is None:
            first_mask = masks[0]
        counts += masks.sum(axis=0)
        done += chunk

    exact = matmul_oracle(a, b_matrix)
    exact_norm = frobenius_norm(exact)

    weights = counts / (trials * keep_prob)
    mean = (a * weights[:, None]).T @ b_matrix
    single = a[first_mask].T @ b_matrix[first_mask] / keep_prob

    return UnbiasednessResult(
        mean_deviation=frobenius_norm(mean - exact) / exact_norm,
        single_trial_deviation=frobenius_norm(single - exact) / exact_norm,
        keep_prob=keep_prob,
        trials=trials,
    )
