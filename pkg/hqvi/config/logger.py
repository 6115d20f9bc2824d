"""
Logging configuration for hqvi.

stdout is reserved for JSON results, so every log record goes to stderr,
with an optional rotating file next to it for long verification runs.
"""

import logging
import sys
from datetime import datetime
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Optional

from .settings import settings

STDERR_FORMAT = "%(asctime)s %(levelname)s [%(name)s] %(message)s"
RUN_FILE_FORMAT = "%(asctime)s %(levelname)s [%(name)s] %(module)s.%(funcName)s:%(lineno)d %(message)s"
TIMESTAMP_FORMAT = "%H:%M:%S"


class LevelColorFormatter(logging.Formatter):
    """Paints the level name with an ANSI color on terminal output."""

    LEVEL_COLORS = {
        "DEBUG": "\033[36m",
        "INFO": "\033[32m",
        "WARNING": "\033[33m",
        "ERROR": "\033[31m",
        "CRITICAL": "\033[41m",
    }
    RESET = "\033[0m"

    def format(self, record: logging.LogRecord) -> str:
        color = self.LEVEL_COLORS.get(record.levelname)
        if color is None:
            return super().format(record)

        # Copy so the run file still sees the plain level name
        painted = logging.makeLogRecord(record.__dict__)
        painted.levelname = f"{color}{record.levelname:<8}{self.RESET}"
        return super().format(painted)


def _run_log_path(log_file: Optional[str]) -> Path:
    if log_file:
        return Path(log_file)
    log_dir = Path(settings.log_dir)
    log_dir.mkdir(parents=True, exist_ok=True)
    return log_dir / f"hqvi_run_{datetime.now().strftime('%Y%m%d')}.log"


def setup_logging(
    log_level: Optional[str] = None,
    log_file: Optional[str] = None,
    enable_file_logging: Optional[bool] = None
) -> logging.Logger:
    """
    (Re)configure the "hqvi" logger tree.

    Args:
        log_level: Override settings.log_level
        log_file: Override the dated run file under settings.log_dir
        enable_file_logging: Override settings.log_to_file

    Returns:
        The "hqvi" logger
    """
    level = getattr(logging, (log_level or settings.log_level).upper())
    to_file = settings.log_to_file if enable_file_logging is None else enable_file_logging

    root = logging.getLogger("hqvi")
    root.setLevel(level)
    root.propagate = False
    root.handlers.clear()

    stderr_handler = logging.StreamHandler(sys.stderr)
    stderr_handler.setLevel(level)
    stderr_handler.setFormatter(LevelColorFormatter(fmt=STDERR_FORMAT, datefmt=TIMESTAMP_FORMAT))
    root.addHandler(stderr_handler)

    if to_file:
        run_file_handler = RotatingFileHandler(
            _run_log_path(log_file),
            maxBytes=10 * 1024 * 1024,
            backupCount=5,
            encoding="utf-8"
        )
        run_file_handler.setLevel(level)
        run_file_handler.setFormatter(logging.Formatter(fmt=RUN_FILE_FORMAT))
        root.addHandler(run_file_handler)

    return root


def get_logger(name: str) -> logging.Logger:
    """Child logger ``hqvi.<name>``."""
    return logging.getLogger(f"hqvi.{name}")


logger = setup_logging()
