"""Process exit codes."""
from enum import IntEnum

from core.args import USAGE_EXIT_CODE

class ExitCode(IntEnum):
    """Enum defining the exit codes of the command line."""
    OK = 0
    NUMERIC_FAILURE = 1
    IO_FAILURE = 2
    USAGE = USAGE_EXIT_CODE
