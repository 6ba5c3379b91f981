"""
Logging configuration for Phicrit.
Reports go to stdout, so log records are written to stderr.
"""
import logging
import sys
from typing import Optional
from app.config import settings

LOGGER_NAME = "phicrit"


def setup_logging(log_level: Optional[str] = None) -> logging.Logger:
    """
    Set up logging configuration.

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
                  If None, uses the configured level (INFO for development, WARNING otherwise)

    Returns:
        Configured logger instance
    """
    if log_level is None:
        log_level = settings.log_level
    log_level = log_level.upper()

    formatter = logging.Formatter(
        fmt='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(log_level)

    # Reconfiguring replaces the handler instead of stacking a second one
    for handler in list(logger.handlers):
        logger.removeHandler(handler)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    console_handler.setLevel(log_level)
    logger.addHandler(console_handler)
    logger.propagate = False

    return logger


# Initialize logger
logger = setup_logging()
