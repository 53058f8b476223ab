"""CSV files of the harness, written atomically with fixed headers."""

import csv
from collections.abc import Iterable, Sequence

import numpy as np

from core.file import atomic_open
from core.pamm import format_epsilon
from .bench import BenchResult
from .montecarlo import KBoundResult, UnbiasednessResult
from .pca import PcaRow
from .sweep import SweepResult
from .training import LossRow, TrainingParity, TrainingRun

SWEEP_HEADER = ["method", "r", "epsilon", "trial", "rel_error", "coverage", "eta",
                "bound_rhs", "compress_ms", "approx_ms"]
TRAINING_HEADER = ["method", "seed", "step", "loss"]
TRAINING_SUMMARY_HEADER = ["method", "seed", "final_loss", "eval_loss", "failed_step", "steps", "retained_scalars"]
TRAINING_PARITY_HEADER = ["baseline_eval_loss", "pamm_eval_loss", "relative_gap", "baseline_seed_spread",
                          "pamm_seed_spread", "threshold"]
KBOUND_HEADER = ["b", "n", "epsilon", "delta", "n_min", "k", "failures", "trials"]
UNBIAS_HEADER = ["keep_prob", "trials", "mean_deviation", "single_trial_deviation"]
BENCH_HEADER = ["b", "n", "m", "k", "reps", "compress_ms", "approx_ms", "exact_ms", "gamma",
                "compressed_scalars", "dense_scalars", "footprint_ratio", "exact_mults", "pamm_mults"]
PCA_HEADER = ["row", "generator", "alpha", "x", "y", "rep_x", "rep_y"]

def format_cell(value) -> str:
    """None is an empty cell; floats keep full precision."""
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)

def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    """Write a header and rows to `path` atomically."""
    with atomic_open(path, "w") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_cell(value) for value in row])

def write_sweep_csv(path: str, results: Iterable[SweepResult]) -> None:
    write_csv(path, SWEEP_HEADER, (
        [str(r.method), r.r, None if r.epsilon is None else format_epsilon(r.epsilon), r.trial,
         r.relative_error, r.coverage, r.eta, r.bound_rhs, r.compress_ms, r.approx_ms]
        for r in results
    ))

def write_training_csv(path: str, rows: Iterable[LossRow]) -> None:
    write_csv(path, TRAINING_HEADER, rows)

def write_training_summary_csv(path: str, runs: Iterable[TrainingRun]) -> None:
    write_csv(path, TRAINING_SUMMARY_HEADER, (
        [run.method, run.seed, run.final_loss, run.eval_loss, run.failed_step, len(run.losses),
         run.retained_scalars]
        for run in runs
    ))

def write_training_parity_csv(path: str, parity: TrainingParity) -> None:
    write_csv(path, TRAINING_PARITY_HEADER, [list(parity)])

def write_kbound_csv(path: str, results: Iterable[KBoundResult]) -> None:
    write_csv(path, KBOUND_HEADER, (
        [r.b, r.n, format_epsilon(r.epsilon), r.delta, r.n_min, r.k, r.failures, r.trials]
        for r in results
    ))

def write_unbias_csv(path: str, results: Iterable[UnbiasednessResult]) -> None:
    write_csv(path, UNBIAS_HEADER, (
        [r.keep_prob, r.trials, r.mean_deviation, r.single_trial_deviation] for r in results
    ))

def write_bench_csv(path: str, results: Iterable[BenchResult]) -> None:
    write_csv(path, BENCH_HEADER, (
        [r.b, r.n, r.m, r.k, r.reps, r.compress_ms, r.approx_ms, r.exact_ms, r.gamma,
         r.footprint.compressed_scalars, r.footprint.dense_scalars, r.footprint.ratio,
         r.multiplies.exact, r.multiplies.pamm]
        for r in results
    ))

def write_pca_csv(path: str, rows: Iterable[PcaRow]) -> None:
    write_csv(path, PCA_HEADER, rows)
