"""Subcommand handlers. Each one writes its outputs and returns what to record in the manifest."""

import argparse
import dataclasses
import math
from typing import NamedTuple

import numpy as np

from core.config import TrainingConfig
from core.harness import (
    PAMM,
    BASELINE,
    ExperimentSpec,
    bench,
    estimator_unbiasedness_mc,
    generate_clustered_data,
    generate_correlated_pair,
    generate_gaussian_data,
    kbound_monte_carlo,
    pca_projection,
    sweep_error_coverage,
    train_toy_comparison,
    write_bench_csv,
    write_kbound_csv,
    write_pca_csv,
    write_sweep_csv,
    write_training_csv,
    write_training_parity_csv,
    write_training_summary_csv,
    write_unbias_csv,
)
from core.linalg import frobenius_norm, load_matrix, matmul_oracle, save_matrix
from core.pamm import (
    COMPRESSED_MAGIC,
    CompressedActivation,
    PammConfig,
    approx_matmul,
    compress,
    error_bound_rhs,
    format_epsilon,
    load_compressed,
    memory_footprint,
    relative_error,
    save_compressed,
)
from .manifest import resolve_output_path

class CommandResult(NamedTuple):
    """Files a command wrote and the seeds it used."""

    outputs: list[str]
    seeds: dict

def _format_beta(beta: float | None) -> str:
    return "undefined" if beta is None else f"{beta:.6g}"

def _working_matrix(path: str) -> np.ndarray:
    # Compressed files hold 32-bit values; compress from the same precision.
    return load_matrix(path).astype(np.float32)

def _pamm_config(args: argparse.Namespace, use_beta: bool = True) -> PammConfig:
    return PammConfig(ratio=args.ratio, k=args.k, epsilon=args.epsilon, seed=args.seed, use_beta=use_beta)

def summary_line(comp: CompressedActivation) -> str:
    """One-line description of a compression."""
    footprint = memory_footprint(comp)
    return (f"b={comp.b} n={comp.n} k={comp.k} eta={comp.eta} beta={_format_beta(comp.beta)} "
            f"footprint_ratio={footprint.ratio:.6g}")

def cmd_compress(args: argparse.Namespace, output_dir: str) -> CommandResult:
    a = _working_matrix(args.input)
    comp = compress(a, _pamm_config(args, use_beta=not args.no_beta))
    output = resolve_output_path(output_dir, args.output)
    save_compressed(output, comp)
    print(summary_line(comp))
    return CommandResult([output], {"seed": args.seed})

def cmd_approx(args: argparse.Namespace, output_dir: str) -> CommandResult:
    comp = load_compressed(args.compressed)
    b_matrix = _working_matrix(args.b_matrix)
    product = approx_matmul(comp, b_matrix)
    output = resolve_output_path(output_dir, args.output)
    save_matrix(output, product)
    print(f"product {product.shape[0]}x{product.shape[1]} written to {output}")

    if args.exact_check:
        a = _working_matrix(args.exact_check)
        error = relative_error(matmul_oracle(a, b_matrix), product)
        line = f"relative_error={error:.6g}"
        if not math.isinf(comp.epsilon):
            bound = error_bound_rhs(a, dataclasses.replace(comp, beta=1.0), b_matrix)
            line += f" bound_rhs={bound:.6g}"
        print(line)
    return CommandResult([output], {"seed": comp.seed})

def cmd_sweep(args: argparse.Namespace, output_dir: str) -> CommandResult:
    spec = ExperimentSpec(
        methods=args.methods,
        b=args.b,
        n=args.n,
        m=args.m,
        ratios=args.ratios,
        epsilons=args.epsilons,
        trials=args.trials,
        seed=args.seed,
        data_source=args.data,
        clusters=args.clusters,
        spread=args.spread,
        input_path=args.input,
    )
    results = sweep_error_coverage(spec, workers=args.workers, timing=args.timing)
    output = resolve_output_path(output_dir, "sweep.csv")
    write_sweep_csv(output, results)
    print(f"{len(results)} sweep rows written to {output}")
    return CommandResult([output], {"seed": args.seed})

def cmd_kbound(args: argparse.Namespace, output_dir: str) -> CommandResult:
    if args.input:
        a = load_matrix(args.input)
    else:
        a = generate_clustered_data(args.b, args.n, args.clusters, args.spread, args.seed)
    result = kbound_monte_carlo(a, args.epsilon, args.delta, args.trials, args.seed)
    output = resolve_output_path(output_dir, "kbound.csv")
    write_kbound_csv(output, [result])
    print(f"n_min={result.n_min} k={result.k}{' (clamped)' if result.clamped else ''} "
          f"failures={result.failures}/{result.trials} rate={result.failure_rate:.4g} "
          f"analytic_union_bound={result.analytic.union_bound:.4g} delta={result.delta}")
    return CommandResult([output], {"seed": args.seed})

def cmd_unbias(args: argparse.Namespace, output_dir: str) -> CommandResult:
    a, b_matrix = generate_correlated_pair(args.b, args.n, args.m, args.seed)
    result = estimator_unbiasedness_mc(a, b_matrix, args.keep_prob, args.trials, args.seed)
    output = resolve_output_path(output_dir, "unbias.csv")
    write_unbias_csv(output, [result])
    print(f"mean_deviation={result.mean_deviation:.4g} "
          f"single_trial_deviation={result.single_trial_deviation:.4g}")
    return CommandResult([output], {"seed": args.seed})

_TRAIN_OVERRIDES = ("steps", "seeds", "ratio", "k", "epsilon", "base_lr", "lr_scale",
                    "optimizer", "schedule", "num_blocks", "dtype")

def training_config(args: argparse.Namespace) -> TrainingConfig:
    """Config file (or defaults) with command-line overrides applied."""
    cfg = TrainingConfig.from_file(args.config) if args.config else TrainingConfig()
    overrides = {name: getattr(args, name) for name in _TRAIN_OVERRIDES if getattr(args, name) is not None}
    return dataclasses.replace(cfg, **overrides)

def cmd_train(args: argparse.Namespace, output_dir: str) -> CommandResult:
    cfg = training_config(args)
    comparison = train_toy_comparison(cfg)
    curves = resolve_output_path(output_dir, "training.csv")
    summary = resolve_output_path(output_dir, "training_summary.csv")
    parity_path = resolve_output_path(output_dir, "training_parity.csv")
    parity = comparison.parity()
    write_training_csv(curves, comparison.rows())
    write_training_summary_csv(summary, comparison.runs)
    write_training_parity_csv(parity_path, parity)

    for method in (BASELINE, PAMM):
        mean = comparison.mean_final_loss(method)
        failed = sum(run.failed for run in comparison.runs if run.method == method)
        print(f"{method}: mean_final_loss={'n/a' if mean is None else f'{mean:.4f}'} failed_runs={failed}")
    if parity.baseline_spread is None:
        print("seed spread needs at least two finished baseline runs")
    elif not parity.resolvable:
        print(f"baseline seed spread {parity.baseline_spread:.4f} is not below the {parity.threshold} "
              "threshold, so the gap is not resolvable at this config")
    elif parity.relative_gap is not None:
        print(f"held-out gap={parity.relative_gap:.4f} seed spread={parity.baseline_spread:.4f} "
              f"threshold={parity.threshold}")
    return CommandResult([curves, summary, parity_path], {"seeds": cfg.seeds, "config": cfg.to_dict()})

def cmd_bench(args: argparse.Namespace, output_dir: str) -> CommandResult:
    result = bench(args.b, args.n, args.m, args.k, args.reps, args.seed, args.theory_only)
    output = resolve_output_path(output_dir, "bench.csv")
    write_bench_csv(output, [result])
    print(f"gamma={result.gamma:.4g} footprint={result.footprint.compressed_scalars}/"
          f"{result.footprint.dense_scalars} (ratio {result.footprint.ratio:.4g}) "
          f"multiplies exact={result.multiplies.exact} pamm={result.multiplies.pamm}")
    if not args.theory_only:
        print(f"median ms: compress={result.compress_ms:.4g} approx={result.approx_ms:.4g} "
              f"exact={result.exact_ms:.4g}")
    return CommandResult([output], {"seed": args.seed})

def cmd_info(args: argparse.Namespace, output_dir: str) -> CommandResult:
    with open(args.path, "rb") as f:
        magic = f.read(len(COMPRESSED_MAGIC))
    if magic == COMPRESSED_MAGIC:
        comp = load_compressed(args.path)
        print(f"{comp!r} seed={comp.seed} epsilon={format_epsilon(comp.epsilon)}")
        print(summary_line(comp))
        return CommandResult([], {"seed": comp.seed})

    matrix = load_matrix(args.path)
    print(f"matrix {matrix.shape[0]}x{matrix.shape[1]} dtype={matrix.dtype} "
          f"frobenius_norm={frobenius_norm(matrix):.6g}")
    return CommandResult([], {})

def cmd_generate(args: argparse.Namespace, output_dir: str) -> CommandResult:
    if args.kind == "gaussian":
        matrix = generate_gaussian_data(args.b, args.n, args.seed, args.dtype)
    else:
        matrix = generate_clustered_data(args.b, args.n, args.clusters, args.spread, args.seed, args.dtype)
    output = resolve_output_path(output_dir, args.output)
    save_matrix(output, matrix)
    print(f"{args.kind} matrix {args.b}x{args.n} written to {output}")
    return CommandResult([output], {"seed": args.seed})

def cmd_pca(args: argparse.Namespace, output_dir: str) -> CommandResult:
    a = _working_matrix(args.input)
    comp = compress(a, _pamm_config(args))
    output = resolve_output_path(output_dir, args.output)
    write_pca_csv(output, pca_projection(a, comp))
    print(summary_line(comp))
    return CommandResult([output], {"seed": args.seed})

HANDLERS = {
    "compress": cmd_compress,
    "approx": cmd_approx,
    "sweep": cmd_sweep,
    "kbound": cmd_kbound,
    "unbias": cmd_unbias,
    "train": cmd_train,
    "bench": cmd_bench,
    "info": cmd_info,
    "generate": cmd_generate,
    "pca": cmd_pca,
}
