"""
Logging for the engine.

Reports are the only thing written to stdout; every log line goes to stderr
and, when configured, to a log file.
"""
import logging
import sys
from pathlib import Path
from typing import Optional, TextIO

from config.settings import settings

# Third-party loggers held at WARNING whatever the engine level
QUIET_LOGGERS = ("networkx",)

CONSOLE_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
DEBUG_CONSOLE_FORMAT = "%(asctime)s %(levelname)s %(name)s [%(threadName)s]: %(message)s"
FILE_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(funcName)s:%(lineno)d - %(message)s"
DATE_FORMAT = "%H:%M:%S"


class ColoredFormatter(logging.Formatter):
    """Level-coloured console formatter; plain when the stream is not a terminal."""

    COLORS = {
        "DEBUG": "\033[36m",
        "INFO": "\033[32m",
        "WARNING": "\033[33m",
        "ERROR": "\033[31m",
        "CRITICAL": "\033[35m",
    }
    RESET = "\033[0m"

    def __init__(self, fmt: str, datefmt: Optional[str] = None, use_color: bool = True) -> None:
        super().__init__(fmt, datefmt)
        self.use_color = use_color

    def format(self, record: logging.LogRecord) -> str:
        if not self.use_color:
            return super().format(record)
        color = self.COLORS.get(record.levelname, self.RESET)
        record = logging.makeLogRecord(record.__dict__)
        record.levelname = f"{color}{record.levelname}{self.RESET}"
        return super().format(record)


def _console_handler(level: str, stream: TextIO) -> logging.Handler:
    # Suite workers log from pool threads; show which one at DEBUG
    fmt = DEBUG_CONSOLE_FORMAT if level == "DEBUG" else CONSOLE_FORMAT
    handler = logging.StreamHandler(stream)
    handler.setFormatter(ColoredFormatter(fmt, DATE_FORMAT, use_color=stream.isatty()))
    return handler


def setup_logging(log_level: Optional[str] = None, log_file: Optional[str] = None) -> None:
    """
    Configure the root logger for one invocation.

    Calling it again replaces the handlers of the previous call.

    Args:
        log_level: Logging level; FIBCAT_LOG_LEVEL when omitted
        log_file: Log file path; FIBCAT_LOG_FILE when omitted
    """
    level = (log_level or settings.log_level).upper()
    file_path = log_file or settings.log_file

    root = logging.getLogger()
    root.setLevel(getattr(logging, level))
    root.handlers.clear()
    root.addHandler(_console_handler(level, sys.stderr))

    if file_path:
        Path(file_path).parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(file_path, encoding="utf-8")
        file_handler.setFormatter(logging.Formatter(FILE_FORMAT))
        root.addHandler(file_handler)

    for name in QUIET_LOGGERS:
        logging.getLogger(name).setLevel(logging.WARNING)

    root.debug(f"Logging at {level}" + (f", file {file_path}" if file_path else ""))


def get_logger(name: str) -> logging.Logger:
    """Module logger (call with __name__)."""
    return logging.getLogger(name)
