"""
Logging utility for the agfft encoder
Run logs rotate on disk; the console handler writes to stderr so stdout stays machine-readable
"""

import logging
import os
import sys
from datetime import datetime
from logging.handlers import RotatingFileHandler
from typing import Any, Dict, Optional

ROOT_LOGGER = "agfft"


def get_logger(name: str) -> logging.Logger:
    """Module logger under the application logger, so setup_logger handlers see it"""
    return logging.getLogger(f"{ROOT_LOGGER}.{name}")


def setup_logger(name: str = ROOT_LOGGER, log_level: int = logging.INFO,
                 log_dir: str = "logs", max_file_size_mb: int = 10,
                 backup_count: int = 5, console_level: int = logging.WARNING) -> logging.Logger:
    """Setup application logger with file rotation and a stderr console"""

    os.makedirs(log_dir, exist_ok=True)

    logger = logging.getLogger(name)
    logger.setLevel(log_level)

    # Clear existing handlers to avoid duplicates
    for handler in list(logger.handlers):
        handler.close()
    logger.handlers.clear()

    detailed_formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(funcName)s:%(lineno)d - %(message)s'
    )

    simple_formatter = logging.Formatter(
        '%(asctime)s - %(levelname)s - %(message)s'
    )

    file_handler = RotatingFileHandler(
        os.path.join(log_dir, f"{name}.log"),
        maxBytes=max_file_size_mb * 1024 * 1024,
        backupCount=backup_count
    )
    file_handler.setLevel(logging.DEBUG)
    file_handler.setFormatter(detailed_formatter)

    # run records only
    run_handler = RotatingFileHandler(
        os.path.join(log_dir, "runs.log"),
        maxBytes=5 * 1024 * 1024,
        backupCount=backup_count
    )
    run_handler.setLevel(logging.INFO)
    run_handler.setFormatter(simple_formatter)
    run_handler.addFilter(lambda record: record.getMessage().startswith("RUN_EVENT"))

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(console_level)
    console_handler.setFormatter(simple_formatter)

    logger.addHandler(file_handler)
    logger.addHandler(run_handler)
    logger.addHandler(console_handler)

    return logger


def log_run_event(logger: logging.Logger, command: str,
                  details: Optional[Dict[str, Any]] = None, outcome: str = "ok"):
    """Record one CLI run"""

    event_data = {
        'timestamp': datetime.now().isoformat(),
        'command': command,
        'outcome': outcome,
        'details': details or {}
    }

    logger.info(f"RUN_EVENT: {event_data}")


def log_error(logger: logging.Logger, error: Exception, context: str = None):
    """Log application errors with context"""

    error_data = {
        'timestamp': datetime.now().isoformat(),
        'error_type': type(error).__name__,
        'error_message': str(error),
        'context': context
    }

    logger.error(f"APPLICATION_ERROR: {error_data}")
