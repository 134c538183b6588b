"""
Logging configuration for the Steinberg character calculator
"""

import sys
from pathlib import Path
from typing import Optional, Union

from loguru import logger

from config import LOG_DIR, LOG_LEVEL, LOG_TO_FILE, PROJECT_ROOT


def setup_logging(level: Optional[str] = None, log_to_file: Optional[bool] = None,
                  log_file: Optional[Union[str, Path]] = None, debug: bool = False):
    """Configure logging for the entire project"""
    level = (level or LOG_LEVEL).upper()
    log_to_file = LOG_TO_FILE if log_to_file is None else log_to_file
    log_file = Path(log_file) if log_file else LOG_DIR / "application.log"
    if not log_file.is_absolute():
        log_file = PROJECT_ROOT / log_file
    log_dir = log_file.parent

    # Remove default logger
    logger.remove()

    # Console logging goes to stderr; stdout carries command output
    logger.add(
        sys.stderr,
        level=level,
        format="<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | <cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>",
        colorize=True,
        backtrace=debug,
        diagnose=debug,
    )

    if log_to_file:
        log_dir.mkdir(parents=True, exist_ok=True)

        # File logging - general log
        logger.add(
            log_file,
            level="DEBUG",
            format="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function}:{line} - {message}",
            rotation="10 MB",
            retention="7 days",
            compression="zip"
        )

        # File logging - error log
        logger.add(
            log_dir / "errors.log",
            level="ERROR",
            format="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function}:{line} - {message}",
            rotation="5 MB",
            retention="30 days",
            compression="zip"
        )

        # Verification runs get their own log
        logger.add(
            log_dir / "verification.log",
            level="INFO",
            format="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function}:{line} - {message}",
            filter=lambda record: "verif" in record["name"].lower() or "pipeline" in record["name"].lower(),
            rotation="5 MB",
            retention="14 days"
        )

    logger.debug(f"Logging initialized at level {level}")


def configure_logging(config, level: Optional[str] = None):
    """Apply the logging section of a loaded ApplicationConfig; `level` overrides it"""
    setup_logging(
        level=level or config.logging.level,
        log_to_file=config.logging.enable_file_logging,
        log_file=config.logging.file_path,
        debug=config.debug,
    )


# Initialize logging when module is imported
setup_logging()
