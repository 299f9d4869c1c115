"""Console logging for subreg.

Records below WARNING are written bare to stdout, so tables and progress can be
piped. Warnings and errors go to stderr as "Warning: ..." and "Error: ...".
Computation modules log at debug level only; ``--verbose`` makes them visible.
"""

import logging
import sys
import time
from collections.abc import Iterator
from contextlib import contextmanager
from typing import TextIO

LOGGER_NAME = "subreg"

DEBUG = logging.DEBUG
INFO = logging.INFO
WARNING = logging.WARNING
ERROR = logging.ERROR

_logger: logging.Logger | None = None


class ConsoleFormatter(logging.Formatter):
    def format(self, record: logging.LogRecord) -> str:
        message = record.getMessage()
        if record.levelno >= WARNING:
            return f"{record.levelname.capitalize()}: {message}"
        return message


def _handler(stream: TextIO, *, below_warning: bool) -> logging.Handler:
    handler = logging.StreamHandler(stream)
    if below_warning:
        handler.setLevel(DEBUG)
        handler.addFilter(lambda record: record.levelno < WARNING)
    else:
        handler.setLevel(WARNING)
    handler.setFormatter(ConsoleFormatter())
    return handler


def setup_logging(verbose: bool = False) -> logging.Logger:
    """(Re)install the stdout and stderr handlers on the ``subreg`` logger.

    With ``verbose`` the debug messages of the computation modules are shown:
    Weyl-sum sizes, cache hits and misses, z-window doublings and timings.
    """
    global _logger

    logger = logging.getLogger(LOGGER_NAME)
    logger.handlers.clear()
    logger.setLevel(DEBUG if verbose else INFO)
    logger.addHandler(_handler(sys.stdout, below_warning=True))
    logger.addHandler(_handler(sys.stderr, below_warning=False))
    logger.propagate = False

    _logger = logger
    return logger


def get_logger() -> logging.Logger:
    global _logger
    if _logger is None:
        _logger = setup_logging()
    return _logger


def debug(msg: str) -> None:
    get_logger().debug(msg)


def info(msg: str) -> None:
    get_logger().info(msg)


def warning(msg: str) -> None:
    get_logger().warning(msg)


def error(msg: str) -> None:
    get_logger().error(msg)


@contextmanager
def timed(task: str) -> Iterator[None]:
    """Log ``task`` and its wall-clock time at debug level when the block ends."""
    start = time.perf_counter()
    try:
        yield
    finally:
        debug(f"{task} ({time.perf_counter() - start:.2f}s)")
