"""Wall-time medians of compress, approximate and exact products next to the predicted speedup."""

import statistics
import time
from typing import NamedTuple

import numpy as np

from core.linalg import ArgumentError, matmul
from core.pamm import (
    MemoryFootprint,
    MultiplyCounts,
    PammConfig,
    approx_matmul,
    compress,
    memory_footprint_for,
    multiply_counts,
    speedup_gamma,
)

MIN_BENCH_REPS = 5

class BenchResult(NamedTuple):
    """Timing medians in milliseconds (None when only theory was requested) and accounting."""

    b: int
    n: int
    m: int
    k: int
    reps: int
    compress_ms: float | None
    approx_ms: float | None
    exact_ms: float | None
    gamma: float
    footprint: MemoryFootprint
    multiplies: MultiplyCounts

def _median_ms(func, reps: int) -> float:
    samples = []
    for _ in range(reps):
        start = time.perf_counter()
        func()
        samples.append((time.perf_counter() - start) * 1000)
    return statistics.median(samples)

def bench(b: int, n: int, m: int, k: int, reps: int = MIN_BENCH_REPS, seed: int = 0,
          theory_only: bool = False) -> BenchResult:
    """
    Time one compress / approximate product / exact product on Gaussian data.

    :param reps: Repetitions per phase, at least 5; medians are reported.
    :param theory_only: Skip the timings and only report γ, footprint and multiply counts.
    """
    if reps < MIN_BENCH_REPS:
        raise ArgumentError(f"Need at least {MIN_BENCH_REPS} repetitions, got {reps}", "bench")
    if k > b:
        raise ArgumentError(f"k={k} exceeds b={b}", "bench")

    gamma = speedup_gamma(b, m, k)
    footprint = memory_footprint_for(b, n, k)
    mults = multiply_counts(b, n, m, k)
    if theory_only:
        return BenchResult(b, n, m, k, reps, None, None, None, gamma, footprint, mults)

    rng = np.random.default_rng(seed)
    a = rng.standard_normal((b, n), dtype=np.float32)
    b_matrix = rng.standard_normal((b, m), dtype=np.float32)
    cfg = PammConfig(k=k, seed=seed)
    comp = compress(a, cfg)

    return BenchResult(
        b, n, m, k, reps,
        compress_ms=_median_ms(lambda: compress(a, cfg), reps),
        approx_ms=_median_ms(lambda: approx_matmul(comp, b_matrix), reps),
        exact_ms=_median_ms(lambda: matmul(a, b_matrix), reps),
        gamma=gamma,
        footprint=footprint,
        multiplies=mults,
    )
