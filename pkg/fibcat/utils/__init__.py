"""Utility helpers."""
from fibcat.utils.decorators import log_execution, suite_guard
from fibcat.utils.formatters import (
    format_check_report,
    format_duration,
    format_json,
    format_run_report,
    format_sweep,
    render_run,
    render_sweep,
)
from fibcat.utils.instance_io import dump_instance, emit_instance, load_instance, parse_instance

__all__ = [
    "log_execution",
    "suite_guard",
    "format_check_report",
    "format_duration",
    "format_json",
    "format_run_report",
    "format_sweep",
    "render_run",
    "render_sweep",
    "dump_instance",
    "emit_instance",
    "load_instance",
    "parse_instance",
]
