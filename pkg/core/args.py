"""Argument management module."""

import argparse
import sys

from core.build_info import BuildInfo
from core.pamm import parse_epsilon

USAGE_EXIT_CODE = 64

class UsageExitParser(argparse.ArgumentParser):
    """ArgumentParser that exits with the usage error code 64 instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT_CODE, f"{self.prog}: error: {message}\n")

def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise ValueError(f"expected a positive integer, got {text}")
    return value

def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {text}")
    return value

def _ratio(text: str) -> float:
    value = float(text)
    if not 0 < value <= 1:
        raise ValueError(f"ratio must be in (0, 1], got {text}")
    return value

def _probability(text: str) -> float:
    value = float(text)
    if not 0 < value < 1:
        raise ValueError(f"probability must be in (0, 1), got {text}")
    return value

def _keep_probability(text: str) -> float:
    value = float(text)
    if not 0 < value <= 1:
        raise ValueError(f"keep probability must be in (0, 1], got {text}")
    return value

def _list_of(item_type):
    def parse(text: str) -> list:
        items = [item.strip() for item in text.split(",") if item.strip()]
        if not items:
            raise ValueError("expected a non-empty comma separated list")
        return [item_type(item) for item in items]
    parse.__name__ = f"{item_type.__name__} list"
    return parse

def _epsilon(text: str) -> float:
    return parse_epsilon(text)

parser = UsageExitParser(prog='pammlab', description='Point-approximate matrix multiplication toolkit')
parser.add_argument('--version', '-v',
                    action='version',
                    version=f'{BuildInfo.version if BuildInfo.version else "development"} '
                            f'(numpy {BuildInfo.numpy_version}, Python {BuildInfo.python_version})')
parser.add_argument('--log-level',
                  help='Set the logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL or integer values)',
                  dest='log_level')

_common = argparse.ArgumentParser(add_help=False)
_common.add_argument('--output-dir', dest='output_dir',
                     help='Directory for outputs and the run manifest '
                          '(default: $PAMM_OUTPUT_DIR or ./pamm_runs)')

_subparsers = parser.add_subparsers(help="subcommand help", dest="subcommand", required=True)

def _add_compression_flags(sub: argparse.ArgumentParser):
    size = sub.add_mutually_exclusive_group(required=True)
    size.add_argument('--ratio', type=_ratio, help='Compression ratio r, k = ceil(r * b)')
    size.add_argument('--k', type=_positive_int, help='Number of generators')
    sub.add_argument('--epsilon', type=_epsilon, default=float('inf'), help='Tolerance or inf (default: inf)')
    sub.add_argument('--seed', type=_seed, default=0, help='Sampling seed (default: 0)')

compress_parser = _subparsers.add_parser('compress', parents=[_common], help='Compress a matrix file')
compress_parser.add_argument('--input', required=True, help='Matrix file (.csv or binary)')
_add_compression_flags(compress_parser)
compress_parser.add_argument('--output', default='compressed.pamc',
                             help='Compressed file, relative paths go into the output directory')
compress_parser.add_argument('--no-beta', action='store_true', dest='no_beta',
                             help='Fix beta to 1 instead of b / (b - eta)')

approx_parser = _subparsers.add_parser('approx', parents=[_common], help='Approximate A^T B from a compressed A')
approx_parser.add_argument('--compressed', required=True, help='Compressed file')
approx_parser.add_argument('--b-matrix', required=True, dest='b_matrix', help='Matrix file for B')
approx_parser.add_argument('--output', default='product.csv', help='Product file (default: product.csv)')
approx_parser.add_argument('--exact-check', dest='exact_check', metavar='A',
                           help='Original matrix; report the relative error against the exact product')

sweep_parser = _subparsers.add_parser('sweep', parents=[_common], help='Error and coverage over (r, epsilon) grids')
sweep_parser.add_argument('--methods', type=_list_of(str), default=['pamm'],
                          help='Comma separated: exact, pamm, uniform_crs, gaussian_sketch')
sweep_parser.add_argument('--b', type=_positive_int, default=256)
sweep_parser.add_argument('--n', type=_positive_int, default=32)
sweep_parser.add_argument('--m', type=_positive_int, default=16)
sweep_parser.add_argument('--ratios', type=_list_of(float), default=[0.125])
sweep_parser.add_argument('--epsilons', type=_list_of(_epsilon), default=[float('inf')])
sweep_parser.add_argument('--trials', type=_positive_int, default=1)
sweep_parser.add_argument('--seed', type=_seed, default=0)
sweep_parser.add_argument('--data', default='synthetic-clustered',
                          choices=['synthetic-gaussian', 'synthetic-clustered', 'matrix-file'])
sweep_parser.add_argument('--clusters', type=_positive_int, default=8)
sweep_parser.add_argument('--spread', type=float, default=0.1)
sweep_parser.add_argument('--input', help='Matrix file for --data matrix-file')
sweep_parser.add_argument('--workers', type=_positive_int, default=1)
sweep_parser.add_argument('--timing', action='store_true', help='Fill the compress_ms and approx_ms columns')

kbound_parser = _subparsers.add_parser('kbound', parents=[_common], help='Monte-Carlo check of the k bound')
kbound_parser.add_argument('--input', help='Matrix file; clustered synthetic data when omitted')
kbound_parser.add_argument('--b', type=_positive_int, default=1024)
kbound_parser.add_argument('--n', type=_positive_int, default=16)
kbound_parser.add_argument('--clusters', type=_positive_int, default=8)
kbound_parser.add_argument('--spread', type=float, default=0.05)
kbound_parser.add_argument('--epsilon', type=_epsilon, default=0.3)
kbound_parser.add_argument('--delta', type=_probability, default=0.05)
kbound_parser.add_argument('--trials', type=_positive_int, default=1000)
kbound_parser.add_argument('--seed', type=_seed, default=0)

unbias_parser = _subparsers.add_parser('unbias', parents=[_common], help='Monte-Carlo check of the beta estimator')
unbias_parser.add_argument('--keep-prob', type=_keep_probability, default=0.5, dest='keep_prob')
unbias_parser.add_argument('--trials', type=_positive_int, default=10000)
unbias_parser.add_argument('--b', type=_positive_int, default=64)
unbias_parser.add_argument('--n', type=_positive_int, default=8)
unbias_parser.add_argument('--m', type=_positive_int, default=4)
unbias_parser.add_argument('--seed', type=_seed, default=0)

train_parser = _subparsers.add_parser('train', parents=[_common], help='Toy training with and without PAMM')
train_parser.add_argument('--config', help='JSON training config; flags below override it')
train_parser.add_argument('--steps', type=_positive_int)
train_parser.add_argument('--seeds', type=_list_of(_seed))
train_parser.add_argument('--ratio', type=_ratio)
train_parser.add_argument('--k', type=_positive_int)
train_parser.add_argument('--epsilon', type=_epsilon)
train_parser.add_argument('--lr', type=float, dest='base_lr')
train_parser.add_argument('--lr-scale', type=float, dest='lr_scale')
train_parser.add_argument('--optimizer', choices=['sgd', 'adam'])
train_parser.add_argument('--schedule', choices=['constant', 'warmup_cosine'])
train_parser.add_argument('--blocks', type=int, choices=[0, 1, 2], dest='num_blocks')
train_parser.add_argument('--dtype', choices=['float32', 'float64'])

bench_parser = _subparsers.add_parser('bench', parents=[_common], help='Time compress / approx / exact products')
bench_parser.add_argument('--b', type=_positive_int, default=4096)
bench_parser.add_argument('--n', type=_positive_int, default=256)
bench_parser.add_argument('--m', type=_positive_int, default=512)
bench_parser.add_argument('--k', type=_positive_int, default=64)
bench_parser.add_argument('--reps', type=_positive_int, default=5)
bench_parser.add_argument('--seed', type=_seed, default=0)
bench_parser.add_argument('--theory-only', action='store_true', dest='theory_only',
                          help='Only report the predicted speedup, footprint and multiply counts')

info_parser = _subparsers.add_parser('info', parents=[_common], help='Describe a matrix or compressed file')
info_parser.add_argument('path')

generate_parser = _subparsers.add_parser('generate', parents=[_common], help='Write a synthetic matrix')
generate_parser.add_argument('--kind', choices=['gaussian', 'clustered'], default='clustered')
generate_parser.add_argument('--b', type=_positive_int, default=256)
generate_parser.add_argument('--n', type=_positive_int, default=32)
generate_parser.add_argument('--clusters', type=_positive_int, default=8)
generate_parser.add_argument('--spread', type=float, default=0.1)
generate_parser.add_argument('--seed', type=_seed, default=0)
generate_parser.add_argument('--dtype', choices=['float32', 'float64'], default='float32')
generate_parser.add_argument('--output', default='matrix.csv')

pca_parser = _subparsers.add_parser('pca', parents=[_common], help='PCA coordinates of rows and representatives')
pca_parser.add_argument('--input', required=True)
_add_compression_flags(pca_parser)
pca_parser.add_argument('--output', default='pca.csv')

replay_parser = _subparsers.add_parser('replay', parents=[_common], help='Re-run the command recorded in a manifest')
replay_parser.add_argument('--manifest', required=True)

arguments = argparse.Namespace()

def parse_argv(argv: list[str], namespace: argparse.Namespace | None = None) -> argparse.Namespace:
    """Parse a command line, keeping it on the namespace as `argv`."""
    namespace = argparse.Namespace() if namespace is None else namespace
    parser.parse_args(argv, namespace=namespace)
    namespace.argv = list(argv)
    return namespace

def parse_args(argv: list[str] | None = None):
    """Parse arguments."""
    parse_argv(sys.argv[1:] if argv is None else argv, arguments)
