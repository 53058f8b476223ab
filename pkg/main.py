"""pammlab entrypoint"""

import sys

from core.args import arguments, parse_args
from core.logger import setup_logger
from cli import run as run_cli

if __name__ == "__main__":
    parse_args()
    setup_logger()
    sys.exit(run_cli(arguments))
