"""
logging_config.py — Centralized Logging Configuration for the Simulator

This module configures unified logging behavior for the CLI, the HTTP service
and the library. It ensures that all modules log messages consistently.

Features:
    • Console logging (stdout) with optional file output
    • Process ID tagging for parallel sweeps and the HTTP worker
    • Standardized log format for all modules
    • Reduced verbosity for external dependencies (uvicorn access log, httpx)
"""

import logging
import os
import sys

LOG_FORMAT = '%(asctime)s - %(levelname)s - [PID:%(process)d] - %(message)s'


def setup_logging(level: str | None = None, log_file: str | None = None):
    """
    Configures the global logging system for the application.

    The configuration includes:
        - Log level: argument, else `AGT_LOG_LEVEL`, else INFO
        - Log format: timestamp, log level, process ID, and message
        - Output destinations:
            1. Console (stdout)
            2. File: argument or `AGT_LOG_FILE` (only when set)
        - Reduced verbosity for third-party libraries

    Args:
        level (str | None): Level name such as "INFO" or "DEBUG".
        log_file (str | None): Path of an additional persistent log file.
    """
    level = (level or os.environ.get("AGT_LOG_LEVEL", "INFO")).upper()
    log_file = log_file or os.environ.get("AGT_LOG_FILE")

    handlers = [logging.StreamHandler(sys.stdout)]
    if log_file:
        handlers.append(logging.FileHandler(log_file))

    logging.basicConfig(level=level, format=LOG_FORMAT, handlers=handlers, force=True)

    # Reduce verbosity from external libraries
    logging.getLogger("uvicorn.access").setLevel(logging.WARNING)
    logging.getLogger("httpx").setLevel(logging.WARNING)


def get_logger(name):
    """
    Returns a configured logger instance for a given module or component name.

    Args:
        name (str): The logger name, typically the module's __name__.

    Returns:
        logging.Logger: A logger that follows the global format and handlers.
    """
    return logging.getLogger(name)
