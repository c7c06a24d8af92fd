"""Logging configuration for charflow."""

import logging
import os
import sys
from logging.handlers import RotatingFileHandler

from charflow.core.config import settings

# Console and file formats; the debug one adds the call site
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DEBUG_LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - [%(filename)s:%(lineno)d] - %(message)s"

# Log file names, created under settings.LOG_DIR when it is set
MAIN_LOG_FILE = "charflow.log"
ERROR_LOG_FILE = "error.log"
TRACE_LOG_FILE = "trace.log"

# Rotation: 10 MB per file
MAX_LOG_SIZE = 10 * 1024 * 1024
BACKUP_COUNT = 5


def get_file_handler(filename: str, level: int, format_string: str) -> RotatingFileHandler:
    """Rotating UTF-8 file handler at the given level."""
    handler = RotatingFileHandler(
        filename=filename,
        maxBytes=MAX_LOG_SIZE,
        backupCount=BACKUP_COUNT,
        encoding="utf-8"
    )
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter(format_string))
    return handler


def get_console_handler(level: int, format_string: str) -> logging.StreamHandler:
    """Create a console log handler on stderr (stdout carries reports)."""
    handler = logging.StreamHandler(sys.stderr)
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter(format_string))
    return handler


def setup_logging(level: str | None = None) -> None:
    """Configure package logging"""
    root_logger = logging.getLogger("charflow")
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    if settings.DEBUG:
        console_level = logging.DEBUG
        format_string = DEBUG_LOG_FORMAT
    else:
        console_level = logging.getLevelName(level or settings.LOG_LEVEL)
        if not isinstance(console_level, int):
            console_level = logging.WARNING
        format_string = LOG_FORMAT

    root_logger.setLevel(min(console_level, logging.INFO))
    root_logger.addHandler(get_console_handler(console_level, format_string))
    root_logger.propagate = False

    if settings.LOG_DIR:
        os.makedirs(settings.LOG_DIR, exist_ok=True)
        root_logger.addHandler(get_file_handler(
            os.path.join(settings.LOG_DIR, MAIN_LOG_FILE),
            logging.DEBUG if settings.DEBUG else logging.INFO,
            format_string,
        ))
        # errors only, with call sites
        root_logger.addHandler(get_file_handler(
            os.path.join(settings.LOG_DIR, ERROR_LOG_FILE), logging.ERROR, DEBUG_LOG_FORMAT
        ))
        # Per-step tracer detail is noisy; it gets its own file
        tracer_logger = logging.getLogger("charflow.modules.tracer")
        for handler in tracer_logger.handlers[:]:
            tracer_logger.removeHandler(handler)
        tracer_logger.addHandler(get_file_handler(
            os.path.join(settings.LOG_DIR, TRACE_LOG_FILE), logging.DEBUG, DEBUG_LOG_FORMAT
        ))

    logging.getLogger("asyncio").setLevel(logging.WARNING)

    root_logger.debug(f"charflow {settings.VERSION} logging at {logging.getLevelName(console_level)} ({settings.ENV})")


def init_logging(level: str | None = None) -> None:
    """Initialize package logging system"""
    setup_logging(level)
