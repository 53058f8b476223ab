"""
Harness Module

Synthetic data, (r, ε) error and coverage sweeps, Monte-Carlo checks of the k bound and
of the β estimator, the Gaussian sketch baseline, toy training comparisons, timing and
PCA export, plus the CSV files they are written to.
"""

from .bench import BenchResult, bench
from .csv_output import (
    BENCH_HEADER,
    KBOUND_HEADER,
    PCA_HEADER,
    SWEEP_HEADER,
    TRAINING_HEADER,
    TRAINING_PARITY_HEADER,
    TRAINING_SUMMARY_HEADER,
    UNBIAS_HEADER,
    write_bench_csv,
    write_csv,
    write_kbound_csv,
    write_pca_csv,
    write_sweep_csv,
    write_training_csv,
    write_training_parity_csv,
    write_training_summary_csv,
    write_unbias_csv,
)
from .data import (
    DataSource,
    generate_clustered_data,
    generate_correlated_pair,
    generate_gaussian_data,
    trial_seed,
)
from .montecarlo import KBoundResult, UnbiasednessResult, estimator_unbiasedness_mc, kbound_monte_carlo
from .pca import PcaRow, pca_projection
from .sketch import SketchResult, gaussian_sketch_baseline
from .sweep import ExperimentSpec, Method, SweepResult, sweep_error_coverage
from .training import (
    BASELINE,
    PAMM,
    PARITY_THRESHOLD,
    LossRow,
    TrainingComparison,
    TrainingParity,
    TrainingRun,
    evaluation_batch,
    reverse_copy_task,
    train_run,
    train_toy_comparison,
)

__all__ = [
    'BASELINE',
    'BENCH_HEADER',
    'BenchResult',
    'DataSource',
    'ExperimentSpec',
    'KBOUND_HEADER',
    'KBoundResult',
    'LossRow',
    'Method',
    'PAMM',
    'PARITY_THRESHOLD',
    'PCA_HEADER',
    'PcaRow',
    'SWEEP_HEADER',
    'SketchResult',
    'SweepResult',
    'TRAINING_HEADER',
    'TRAINING_PARITY_HEADER',
    'TRAINING_SUMMARY_HEADER',
    'TrainingComparison',
    'TrainingParity',
    'TrainingRun',
    'UNBIAS_HEADER',
    'UnbiasednessResult',
    'bench',
    'estimator_unbiasedness_mc',
    'evaluation_batch',
    'gaussian_sketch_baseline',
    'generate_clustered_data',
    'generate_correlated_pair',
    'generate_gaussian_data',
    'kbound_monte_carlo',
    'pca_projection',
    'reverse_copy_task',
    'sweep_error_coverage',
    'train_run',
    'train_toy_comparison',
    'trial_seed',
    'write_bench_csv',
    'write_csv',
    'write_kbound_csv',
    'write_pca_csv',
    'write_sweep_csv',
    'write_training_csv',
    'write_training_parity_csv',
    'write_training_summary_csv',
    'write_unbias_csv',
]
