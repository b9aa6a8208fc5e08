"""
Configuration module for dipcheck
"""

from src.config.logging_config import (
    setup_logging,
    get_logger,
    LoggerMixin,
    log_execution_time,
)

from src.config import settings

from src.config.yaml_loader import (
    BuiltinCatalog,
    get_catalog,
)

__all__ = [
    # Logging
    "setup_logging",
    "get_logger",
    "LoggerMixin",
    "log_execution_time",

    # Settings
    "settings",

    # YAML Loader
    "BuiltinCatalog",
    "get_catalog",
]
