"""
Logging configuration for dipcheck
Structured JSON or rich console logging on stderr, optional rotating log files
"""

import functools
import logging
import logging.handlers
import os
import sys
import time
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv
from pythonjsonlogger import jsonlogger
from rich.console import Console
from rich.logging import RichHandler

# Load environment variables
load_dotenv()

# Configuration from environment
LOG_LEVEL = os.getenv("LOG_LEVEL", "WARNING").upper()
LOG_FORMAT = os.getenv("LOG_FORMAT", "text")  # json or text
LOG_DIR = Path(os.getenv("LOG_DIR", "logs"))
LOG_TO_FILE = os.getenv("LOG_TO_FILE", "false").lower() == "true"
DEBUG_MODE = os.getenv("DEBUG", "false").lower() == "true"

LOG_FILES = {
    "main": "dipcheck.log",
    "errors": "errors.log",
}

# Domain fields copied from `extra` into JSON records
CONTEXT_FIELDS = ("automaton", "command", "eps", "ell", "seed")


class CustomJsonFormatter(jsonlogger.JsonFormatter):
    """JSON formatter with location and analysis context fields"""

    def add_fields(self, log_record, record, message_dict):
        super().add_fields(log_record, record, message_dict)

        log_record["timestamp"] = datetime.now(timezone.utc).isoformat()
        log_record["level"] = record.levelname
        log_record["module"] = record.module
        log_record["function"] = record.funcName
        log_record["line"] = record.lineno

        for field in CONTEXT_FIELDS:
            if hasattr(record, field):
                log_record[field] = getattr(record, field)


def _plain_formatter() -> logging.Formatter:
    return logging.Formatter(
        "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )


def get_file_handler(filename: Path,
                     max_bytes: int = 10 * 1024 * 1024,
                     backup_count: int = 5) -> logging.handlers.RotatingFileHandler:
    """Create a rotating file handler"""
    handler = logging.handlers.RotatingFileHandler(
        filename,
        maxBytes=max_bytes,
        backupCount=backup_count,
    )
    handler.setFormatter(CustomJsonFormatter() if LOG_FORMAT == "json" else _plain_formatter())
    return handler


def get_console_handler(log_format: str = LOG_FORMAT) -> logging.Handler:
    """Create a console handler on stderr; stdout is reserved for reports"""
    if sys.stderr.isatty() and log_format != "json":
        handler: logging.Handler = RichHandler(
            console=Console(stderr=True),
            rich_tracebacks=True,
            tracebacks_show_locals=DEBUG_MODE,
        )
        handler.setFormatter(logging.Formatter("%(message)s"))
    else:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(CustomJsonFormatter() if log_format == "json" else _plain_formatter())
    return handler


def setup_logging(level: Optional[str] = None, log_format: Optional[str] = None) -> None:
    """Setup logging configuration for the entire application"""
    resolved_level = getattr(logging, (level or LOG_LEVEL).upper(), logging.WARNING)
    resolved_format = log_format or LOG_FORMAT

    root_logger = logging.getLogger()
    root_logger.setLevel(resolved_level)
    root_logger.handlers.clear()

    console_handler = get_console_handler(resolved_format)
    console_handler.setLevel(resolved_level)
    root_logger.addHandler(console_handler)

    if LOG_TO_FILE:
        LOG_DIR.mkdir(parents=True, exist_ok=True)

        main_file_handler = get_file_handler(LOG_DIR / LOG_FILES["main"])
        main_file_handler.setLevel(resolved_level)
        root_logger.addHandler(main_file_handler)

        error_file_handler = get_file_handler(LOG_DIR / LOG_FILES["errors"])
        error_file_handler.setLevel(logging.ERROR)
        root_logger.addHandler(error_file_handler)

    root_logger.debug(
        "dipcheck logging initialized",
        extra={"log_level": logging.getLevelName(resolved_level), "log_format": resolved_format},
    )


def get_logger(name: str) -> logging.Logger:
    return logging.getLogger(name)


class LoggerMixin:
    """Mixin class to add logging capabilities to any class"""

    @property
    def logger(self) -> logging.Logger:
        """Get logger for the class"""
        if "_logger" not in self.__dict__:
            self.__dict__["_logger"] = get_logger(
                f"{self.__class__.__module__}.{self.__class__.__name__}"
            )
        return self.__dict__["_logger"]

    def log_debug(self, message: str, **kwargs):
        self.logger.debug(message, extra=kwargs)

    def log_error(self, message: str, exception: Optional[Exception] = None, **kwargs):
        """Log error message with extra fields"""
        if exception:
            self.logger.error(message, exc_info=exception, extra=kwargs)
        else:
            self.logger.error(message, extra=kwargs)


def log_execution_time(func):
    """Decorator to log function execution time"""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        start_time = time.perf_counter()
        logger = get_logger(func.__module__)

        try:
            result = func(*args, **kwargs)
        except Exception as e:
            logger.debug(
                f"Function {func.__name__} failed",
                extra={
                    "execution_time": time.perf_counter() - start_time,
                    "status": "failed",
                    "error": str(e),
                },
            )
            raise

        logger.info(
            f"Function {func.__name__} completed",
            extra={
                "execution_time": time.perf_counter() - start_time,
                "status": "success",
            },
        )
        return result

    return wrapper
