"""Seeded uniform sampling without replacement."""

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from .exceptions import ArgumentError

@dataclass(frozen=True)
class SeededSampler:
    """
    Deterministic source of index samples.

    A sample of size k is the first k entries of a PCG64-seeded permutation of the
    population, so samples drawn with the same seed are nested: the sample of size k
    is a prefix of the sample of size k + 1.
    """

    seed: int
    algorithm: str = "pcg64-permutation-prefix"

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ArgumentError(f"Seed must be a 64-bit unsigned integer, got {self.seed}",
                                "SeededSampler")

    def generator(self) -> np.random.Generator:
        """Fresh generator positioned at the start of this sampler's stream."""
        return np.random.default_rng(self.seed)

def sample_without_replacement(sampler: SeededSampler, population: int, k: int) -> npt.NDArray[np.int64]:
    """
    Draw k distinct indices from [0, population).

    :param sampler: Seed holder.
    :param population: Population size b.
    :param k: Sample size, 1 <= k <= b.
    :return: Array of k distinct indices in draw order.
    """
    if k < 1:
        raise ArgumentError(f"Sample size must be at least 1, got {k}", "sample_without_replacement")
    if k > population:
        raise ArgumentError(f"Sample size {k} exceeds population {population}",
                            "sample_without_replacement")

    return sampler.generator().permutation(population)[:k].astype(np.int64)
