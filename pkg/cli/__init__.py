"""Command-line front end"""

import argparse
import time

from core.args import parse_argv
from core.layers import LayerStateError
from core.linalg import ArgumentError, FormatError, LinalgError, ShapeError
from core.logger import get_logger
from core.pamm import PammError
from .commands import HANDLERS, CommandResult
from .exit_codes import ExitCode
from .manifest import RunManifest, resolve_output_dir

def _execute(args: argparse.Namespace, output_dir: str) -> CommandResult:
    """Run one subcommand and write its manifest."""
    started = time.perf_counter()
    result = HANDLERS[args.subcommand](args, output_dir)
    manifest = RunManifest(
        subcommand=args.subcommand,
        argv=list(getattr(args, "argv", [])),
        seeds=result.seeds,
        outputs=result.outputs,
        wall_time_s=time.perf_counter() - started,
    )
    path = manifest.save(output_dir)
    get_logger().info("%s finished in %.3fs, manifest %s", args.subcommand, manifest.wall_time_s, path)
    return result

def _replay(args: argparse.Namespace, output_dir: str) -> CommandResult:
    manifest = RunManifest.from_file(args.manifest)
    if manifest.subcommand == "replay":
        raise ArgumentError("A replay manifest cannot be replayed", "replay")

    recorded = parse_argv(manifest.argv)
    get_logger().info("Replaying %s from %s", manifest.subcommand, args.manifest)
    return _execute(recorded, output_dir)

def run(arguments: argparse.Namespace) -> int:
    """Run the parsed command line and return the process exit code."""
    logger = get_logger()
    output_dir = resolve_output_dir(getattr(arguments, "output_dir", None))

    try:
        if arguments.subcommand == "replay":
            _replay(arguments, output_dir)
        else:
            _execute(arguments, output_dir)
    except ArgumentError as e:
        logger.error("Invalid arguments: %s", e)
        return ExitCode.USAGE
    except (OSError, FormatError, ShapeError) as e:
        logger.error("I/O failure: %s", e)
        return ExitCode.IO_FAILURE
    except (LinalgError, PammError, LayerStateError) as e:
        logger.error("Run failed: %s", e)
        return ExitCode.NUMERIC_FAILURE
    return ExitCode.OK
