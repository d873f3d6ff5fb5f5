"""
Centralized logging configuration for the entlifepy command line and scripts.

Usage:
    from common.logger import setup_logging

    # Once, at program startup:
    logger = setup_logging("entlifepy")

    # In library modules (no setup needed):
    import logging
    logger = logging.getLogger(__name__)
"""

import logging
import re
from logging.handlers import RotatingFileHandler
from pathlib import Path

_PROJECT_ROOT = Path(__file__).resolve().parent.parent
_LOGS_DIR = _PROJECT_ROOT / "logs"


def _sanitize_filename(name: str) -> str:
    """Convert a name like 'entlifepy verify (choi)' to 'entlifepy_verify_choi'."""
    sanitized = re.sub(r'[^a-z0-9]+', '_', name.lower()).strip('_')
    return sanitized


def setup_logging(
    app_name: str,
    log_level: int = logging.WARNING,
    max_bytes: int = 10 * 1024 * 1024,
    backup_count: int = 5,
    log_to_file: bool = False,
) -> logging.Logger:
    """
    Configure root logging with console output and an optional rotating file.

    The console handler writes to stderr so that result tables on stdout stay
    machine-readable. Library modules inherit the handlers through the root
    logger.

    Args:
        app_name: Human-readable program identifier, also used for the log file name.
        log_level: Minimum log level (default: WARNING).
        max_bytes: Max size per log file before rotation (default: 10 MB).
        backup_count: Number of rotated backup files to keep (default: 5).
        log_to_file: Also write to logs/<app_name>.log.

    Returns:
        Configured logging.Logger instance for the program.
    """
    formatter = logging.Formatter(
        "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    )

    console_handler = logging.StreamHandler()
    console_handler.setLevel(log_level)
    console_handler.setFormatter(formatter)

    root_logger = logging.getLogger()
    root_logger.setLevel(log_level)
    root_logger.handlers.clear()
    root_logger.addHandler(console_handler)

    logger = logging.getLogger(app_name)

    if log_to_file:
        _LOGS_DIR.mkdir(parents=True, exist_ok=True)
        log_file = _LOGS_DIR / f"{_sanitize_filename(app_name)}.log"
        file_handler = RotatingFileHandler(
            log_file,
            maxBytes=max_bytes,
            backupCount=backup_count,
            encoding="utf-8",
        )
        file_handler.setLevel(log_level)
        file_handler.setFormatter(formatter)
        root_logger.addHandler(file_handler)
        logger.info(f"Logging initialized -> {log_file}")
    else:
        logger.debug("Logging initialized (console only)")

    return logger
