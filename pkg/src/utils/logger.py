"""Logging setup for the command-line runs"""

import logging
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Optional

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'


class StderrHandler(logging.StreamHandler):
    """Stream handler bound to the current sys.stderr at emit time"""

    @property
    def stream(self):
        return sys.stderr

    @stream.setter
    def stream(self, value):
        pass


def setup_logger(
    name: str,
    log_file: Optional[str] = None,
    level: str = "WARNING",
    max_bytes: int = 10485760,  # 10MB
    backup_count: int = 5,
    console_output: bool = True
) -> logging.Logger:
    """
    Configure a package logger with a rotating file and a stderr handler

    Calling it again replaces the handlers installed by the previous call, so
    one process can run several commands with different log files. Stdout is
    left to command results.

    Args:
        name: Logger name (the CLI configures "src")
        log_file: Path to the rotating log file (optional)
        level: Logging level name; unknown names fall back to WARNING
        max_bytes: Size at which the log file rotates
        backup_count: Rotated files to keep
        console_output: Whether to also log to stderr

    Returns:
        Configured logger
    """
    logger = logging.getLogger(name)
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()

    log_level = getattr(logging, str(level).upper(), logging.WARNING)
    logger.setLevel(log_level)
    logger.propagate = False
    formatter = logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)

    handlers = []
    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        handlers.append(RotatingFileHandler(log_file, maxBytes=max_bytes, backupCount=backup_count))
    if console_output:
        handlers.append(StderrHandler())

    for handler in handlers:
        handler.setLevel(log_level)
        handler.setFormatter(formatter)
        logger.addHandler(handler)

    return logger
