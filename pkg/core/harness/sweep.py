"""Error and coverage sweeps over compression ratio and tolerance."""

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import StrEnum

import numpy as np

from core.linalg import ArgumentError, DenseMatrix, NumericError, load_matrix, matmul_oracle
from core.logger import get_logger
from core.pamm import PammConfig, approx_matmul, compress, error_report, parse_epsilon, relative_error
from .data import DataSource, generate_clustered_data, generate_gaussian_data, trial_seed
from .sketch import gaussian_sketch_baseline

class Method(StrEnum):
    """Ways of producing the product estimate."""
    EXACT = "exact"
    PAMM = "pamm"
    UNIFORM_CRS = "uniform_crs"
    GAUSSIAN_SKETCH = "gaussian_sketch"

@dataclass
class ExperimentSpec:
    """
    What a sweep runs: methods, matrix sizes, grids, trials and data.

    With a matrix file as data source `b` and `n` are taken from the file.
    """

    methods: list[Method] = field(default_factory=lambda: [Method.PAMM])
    b: int = 256
    n: int = 32
    m: int = 16
    ratios: list[float] = field(default_factory=lambda: [0.125])
    epsilons: list[float] = field(default_factory=lambda: [math.inf])
    trials: int = 1
    seed: int = 0
    data_source: DataSource = DataSource.CLUSTERED
    clusters: int = 8
    spread: float = 0.1
    input_path: str | None = None

    def __post_init__(self):
        try:
            self.methods = [Method(method) for method in self.methods]
        except ValueError as e:
            raise ArgumentError(f"Unknown method in {self.methods}", "ExperimentSpec") from e
        self.data_source = DataSource(self.data_source)
        self.epsilons = [parse_epsilon(epsilon) for epsilon in self.epsilons]

        if not self.methods or not self.ratios or not self.epsilons:
            raise ArgumentError("Method, ratio and epsilon grids must be non-empty", "ExperimentSpec")
        if self.trials < 1:
            raise ArgumentError(f"trials must be at least 1, got {self.trials}", "ExperimentSpec")
        if any(not 0 < r <= 1 for r in self.ratios):
            raise ArgumentError(f"Ratios must be in (0, 1], got {self.ratios}", "ExperimentSpec")
        if min(self.b, self.n, self.m) < 1:
            raise ArgumentError("Matrix sizes must be positive", "ExperimentSpec")
        if self.data_source == DataSource.FILE and not self.input_path:
            raise ArgumentError("A matrix-file data source needs an input path", "ExperimentSpec")

@dataclass
class SweepResult:
    """
    One (method, r, ε, trial) measurement.

    `epsilon` is None for methods without a tolerance; `bound_rhs` is None for infinite ε
    and for baselines; timings are None unless requested.
    """

    method: Method
    r: float
    epsilon: float | None
    trial: int
    seed: int
    relative_error: float
    coverage: float
    eta: int
    bound_rhs: float | None = None
    compress_ms: float | None = None
    approx_ms: float | None = None

    def sort_key(self) -> tuple:
        epsilon = -1.0 if self.epsilon is None else self.epsilon
        return (self.method.value, self.r, epsilon, self.trial)

def _load_file_source(spec: ExperimentSpec) -> DenseMatrix:
    # Missing files surface as OSError.
    return load_matrix(spec.input_path).astype(np.float64)

def _trial_matrices(spec: ExperimentSpec, seed: int, file_data: DenseMatrix | None):
    if spec.data_source == DataSource.FILE:
        a = file_data
    elif spec.data_source == DataSource.GAUSSIAN:
        a = generate_gaussian_data(spec.b, spec.n, seed)
    else:
        a = generate_clustered_data(spec.b, spec.n, spec.clusters, spec.spread, seed)
    b_matrix = np.random.default_rng([seed, 1]).standard_normal((a.shape[0], spec.m))
    return a.astype(np.float32), b_matrix.astype(np.float32)

def _timed(timing: bool, func, *args):
    if not timing:
        return func(*args), None
    start = time.perf_counter()
    value = func(*args)
    return value, (time.perf_counter() - start) * 1000

def _pamm_result(method: Method, r: float, epsilon: float, trial: int, seed: int,
                 a: DenseMatrix, b_matrix: DenseMatrix, timing: bool) -> SweepResult:
    cfg = PammConfig(ratio=r, epsilon=epsilon, seed=seed)
    comp, compress_ms = _timed(timing, compress, a, cfg)
    _, approx_ms = _timed(timing, approx_matmul, comp, b_matrix)
    report = error_report(a, comp, b_matrix)
    return SweepResult(method, r, epsilon, trial, seed, report.relative_error, report.coverage,
                       report.eta, report.bound_rhs, compress_ms, approx_ms)

def _run_trial(spec: ExperimentSpec, trial: int, file_data: DenseMatrix | None,
               timing: bool) -> list[SweepResult]:
    seed = trial_seed(spec.seed, trial)
    a, b_matrix = _trial_matrices(spec, seed, file_data)
    exact = matmul_oracle(a, b_matrix)

    results = []
    for method in spec.methods:
        for r in spec.ratios:
            point = f"method={method} r={r} trial={trial}"
            try:
                if method == Method.EXACT:
                    results.append(SweepResult(method, r, None, trial, seed,
                                               relative_error(exact, exact), 1.0, 0))
                elif method == Method.UNIFORM_CRS:
                    results.append(_pamm_result(method, r, 0.0, trial, seed, a, b_matrix, timing))
                elif method == Method.GAUSSIAN_SKETCH:
                    k = min(a.shape[1], max(1, math.ceil(round(r * a.shape[1], 9))))
                    sketch, approx_ms = _timed(timing, gaussian_sketch_baseline, a, b_matrix, k, seed)
                    results.append(SweepResult(method, r, None, trial, seed,
                                               relative_error(exact, sketch.approx), 1.0, 0,
                                               approx_ms=approx_ms))
                else:
                    for epsilon in spec.epsilons:
                        point = f"method={method} r={r} epsilon={epsilon} trial={trial}"
                        results.append(_pamm_result(method, r, epsilon, trial, seed, a, b_matrix, timing))
            except NumericError as e:
                raise NumericError(f"{e} at {point}", "sweep_error_coverage", e.step) from e
    return results

def sweep_error_coverage(spec: ExperimentSpec, workers: int = 1, timing: bool = False) -> list[SweepResult]:
    """
    Measure relative error, coverage and drops over the (method, r, ε, trial) grid.

    All methods of a trial see the same A and B. `uniform_crs` is PAMM at ε = 0 and is
    reported once per ratio, as are the baselines without a tolerance.

    :param spec: Experiment description.
    :param workers: Trials evaluated concurrently.
    :param timing: Fill the per-phase wall time columns.
    :return: Rows sorted by (method, r, ε, trial).
    """
    if workers < 1:
        raise ArgumentError(f"workers must be at least 1, got {workers}", "sweep_error_coverage")

    file_data = _load_file_source(spec) if spec.data_source == DataSource.FILE else None
    logger = get_logger()
    logger.info("Sweeping %s over r=%s, epsilon=%s, %d trial(s)",
                [str(m) for m in spec.methods], spec.ratios, spec.epsilons, spec.trials)

    if workers == 1:
        per_trial = [_run_trial(spec, trial, file_data, timing) for trial in range(spec.trials)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            per_trial = list(executor.map(lambda t: _run_trial(spec, t, file_data, timing),
                                          range(spec.trials)))

    results = sorted((row for rows in per_trial for row in rows), key=SweepResult.sort_key)
    logger.info("Sweep finished with %d rows", len(results))
    return results
