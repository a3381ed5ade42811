"""Config package initialization."""
from config.constants import (
    PAIR_SEPARATOR,
    SCHEMA_VERSION,
    ExitCode,
    Marked,
    ReportFormat,
    Side,
    Suite,
    Variance,
)
from config.logger import get_logger, setup_logging
from config.settings import settings

__all__ = [
    "settings",
    "setup_logging",
    "get_logger",
    "PAIR_SEPARATOR",
    "SCHEMA_VERSION",
    "ExitCode",
    "Marked",
    "ReportFormat",
    "Side",
    "Suite",
    "Variance",
]
