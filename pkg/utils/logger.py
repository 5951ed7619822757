"""
Centralized logging configuration using Python's logging module.
Log records go to stderr so command output on stdout stays deterministic.
"""

import logging
from pathlib import Path
from typing import Optional
from rich.console import Console
from rich.logging import RichHandler

FILE_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def setup_logger(
    name: str,
    level: Optional[str] = None,
    log_file: Optional[Path] = None
) -> logging.Logger:
    """
    Create a configured logger instance.

    Args:
        name: Logger name (typically __name__ from calling module)
        level: Logging level (defaults to settings.log_level)
        log_file: Optional file path for file logging

    Returns:
        Configured logger instance
    """
    if level is None:
        from config.settings import settings

        level = settings.log_level
    numeric_level = getattr(logging, level.upper())

    logger = logging.getLogger(name)
    logger.setLevel(numeric_level)
    if logger.handlers:
        return logger

    # Markup off: messages carry array reprs with square brackets
    console_handler = RichHandler(
        console=Console(stderr=True),
        level=numeric_level,
        markup=False,
        rich_tracebacks=True,
        log_time_format="[%X]",
    )
    logger.addHandler(console_handler)

    if log_file:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(logging.Formatter(FILE_FORMAT))
        logger.addHandler(file_handler)

    return logger
