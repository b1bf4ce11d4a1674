"""
Logging configuration for the CLI and sweep workers
"""

import logging
from pathlib import Path
from typing import Optional, Union

import colorlog
from tqdm import tqdm

CONSOLE_FORMAT = "%(log_color)s%(levelname)-8s%(reset)s %(blue)s%(name)s%(reset)s - %(message)s"
PLAIN_FORMAT = "%(levelname)-8s %(name)s - %(message)s"
FILE_FORMAT = "%(asctime)s - %(processName)s - %(name)s - %(levelname)s - %(message)s"

LOG_COLORS = {
    "DEBUG": "cyan",
    "INFO": "green",
    "WARNING": "yellow",
    "ERROR": "red",
    "CRITICAL": "red,bg_white",
}

# Loggers of the process and thread pools used by the harness
QUIET_LOGGERS = ("concurrent.futures",)


class TqdmLoggingHandler(logging.StreamHandler):
    """Console handler that prints through tqdm so records do not tear the progress bar"""

    def emit(self, record: logging.LogRecord) -> None:
        try:
            tqdm.write(self.format(record), file=self.stream)
            self.flush()
        except Exception:
            self.handleError(record)


def _resolve_level(level: Union[str, int]) -> int:
    if isinstance(level, int):
        return level
    numeric = logging.getLevelName(level.upper())
    if not isinstance(numeric, int):
        raise ValueError(f"Unknown log level: {level}")
    return numeric


def _console_formatter(enable_colors: bool) -> logging.Formatter:
    if enable_colors:
        return colorlog.ColoredFormatter(CONSOLE_FORMAT, log_colors=LOG_COLORS)
    return logging.Formatter(PLAIN_FORMAT)


def setup_logging(
    level: Union[str, int] = "INFO",
    log_file: Optional[str] = None,
    enable_colors: bool = True
) -> None:
    """
    Configure the root logger for a CLI invocation

    Console records go to stderr through tqdm, keeping stdout free for
    the command summaries.

    Args:
        level: Logging level name or number
        log_file: Optional file receiving timestamped records from every process
        enable_colors: Colored console output via colorlog

    Raises:
        ValueError: If the level name is unknown
    """
    numeric_level = _resolve_level(level)

    root_logger = logging.getLogger()
    root_logger.setLevel(numeric_level)
    root_logger.handlers.clear()

    console_handler = TqdmLoggingHandler()
    console_handler.setLevel(numeric_level)
    console_handler.setFormatter(_console_formatter(enable_colors))
    root_logger.addHandler(console_handler)

    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_path)
        file_handler.setLevel(numeric_level)
        file_handler.setFormatter(logging.Formatter(FILE_FORMAT, datefmt="%Y-%m-%d %H:%M:%S"))
        root_logger.addHandler(file_handler)

    for name in QUIET_LOGGERS:
        logging.getLogger(name).setLevel(logging.WARNING)


def configure_worker_logging(
    level: Union[str, int],
    log_file: Optional[str] = None,
    enable_colors: bool = False
) -> None:
    """Process-pool initializer: spawned workers start with an unconfigured root logger"""
    setup_logging(level, log_file, enable_colors)
