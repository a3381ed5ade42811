"""
Check and sweep command handlers.
"""
import sys
from pathlib import Path
from typing import List, Optional, TextIO

from config import ExitCode, ReportFormat, get_logger
from config.constants import Suite
from fibcat.exceptions import FibcatError
from fibcat.models.report import SweepRow
from fibcat.services.suites import SuiteRunner, resolve_suites
from fibcat.utils import load_instance, render_run, render_sweep

logger = get_logger(__name__)


class CheckHandlers:
    """Handlers for --check and --sweep."""

    def __init__(self, runner: SuiteRunner, out: Optional[TextIO] = None) -> None:
        """
        Initialize check handlers.

        Args:
            runner: Suite runner
            out: Stream receiving the reports; stdout when omitted
        """
        self.runner = runner
        self.out = out

    def _emit(self, text: str) -> None:
        (self.out or sys.stdout).write(text)

    def check(
        self,
        path: str,
        suite: str = Suite.ALL.value,
        report_format: ReportFormat = ReportFormat.JSON,
        include_timings: bool = False,
    ) -> ExitCode:
        """
        Handle --check: run the selected suites on one instance file.

        Args:
            path: Instance file
            suite: Suite name or "all"
            report_format: json or text
            include_timings: Add per-suite timings

        Returns:
            OK if every suite passed, CHECK_FAILED otherwise

        Raises:
            ParseError: If the file does not load
        """
        instance = load_instance(path)
        run = self.runner.run(instance, resolve_suites(suite))
        self._emit(render_run(run, report_format, include_timings))
        return ExitCode.OK if run.passed else ExitCode.CHECK_FAILED

    def sweep(
        self,
        directory: str,
        suite: str = Suite.ALL.value,
        report_format: ReportFormat = ReportFormat.JSON,
    ) -> ExitCode:
        """
        Handle --sweep: check every *.json file of a directory, skipping
        files whose name starts with an underscore.

        Files that do not load are reported as rows with an error and count
        as failures; they do not stop the sweep.

        Args:
            directory: Directory of instance files
            suite: Suite name or "all"
            report_format: json or text

        Returns:
            OK if every instance loaded and passed, CHECK_FAILED otherwise

        Raises:
            FileNotFoundError: If the directory does not exist
        """
        root = Path(directory)
        if not root.is_dir():
            raise FileNotFoundError(f"not a directory: {directory}")
        suites = resolve_suites(suite)
        rows: List[SweepRow] = []
        files = sorted(p for p in root.glob("*.json") if not p.name.startswith("_"))
        logger.info(f"Sweeping {len(files)} instance files in {root}")
        for file in files:
            try:
                instance = load_instance(file)
            except FibcatError as e:
                logger.warning(f"Skipping {file.name}: {e}")
                rows.append(SweepRow(file.name, "", False, error=str(e)))
                continue
            run = self.runner.run(instance, suites)
            failing = [r.suite for r in run.reports if not r.passed]
            rows.append(SweepRow(file.name, instance.name, run.passed, failing))
        self._emit(render_sweep(rows, report_format))
        return ExitCode.OK if rows and all(r.passed for r in rows) else ExitCode.CHECK_FAILED
