"""Logger module."""

import os
import sys
import logging
import inspect

LEVEL_MAP = {
    "DEBUG": logging.DEBUG,
    "INFO": logging.INFO,
    "WARNING": logging.WARNING,
    "ERROR": logging.ERROR,
    "CRITICAL": logging.CRITICAL
}

def get_logger(module_name=None):
    """
    Get a logger with a specific module name.

    :param module_name: The name of the module. If None, uses the caller's module name.
    :return: A logger instance with the specified name.
    """
    if module_name is None:
        frame = inspect.stack()[1]
        module = inspect.getmodule(frame[0])
        module_name = module.__name__ if module else "unknown"

    if module_name == "__main__":
        return default_logger

    return logging.getLogger(module_name)

# Default logger with the main application name
default_logger = get_logger("pammlab")

def resolve_log_level(value: str | int | None) -> int:
    """
    Turn a level name or number into a logging level.

    :param value: Level name (case-insensitive), numeric string, integer or None.
    :return: The logging level, INFO when the value is missing or invalid.
    """
    if value is None:
        return logging.INFO
    if isinstance(value, int):
        return value

    if value.isdigit():
        level = int(value)
        if level in LEVEL_MAP.values():
            return level
        print(f"Invalid log level index: {level}. Using default (INFO).", file=sys.stderr)
        return logging.INFO

    name = value.upper()
    if name in LEVEL_MAP:
        return LEVEL_MAP[name]
    print(f"Invalid log level: {value}. Using default (INFO).", file=sys.stderr)
    return logging.INFO

def setup_logger(log_level: str | int | None = None):
    """Setup logger for pammlab."""
    # Imported here so library users can call get_logger() without the CLI parser.
    from core.args import arguments

    if log_level is None:
        log_level = getattr(arguments, "log_level", None)
    if log_level is None:
        log_level = os.environ.get("LOG_LEVEL")

    level = resolve_log_level(log_level)

    # Configure logging
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(levelname)s - %(name)s - %(message)s",
        handlers=[
            logging.StreamHandler()  # Print logs to the console
        ]
    )

    get_logger().debug("Logger initialized with level: %s", logging.getLevelName(level))
