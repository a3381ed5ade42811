"""
Extension command handler.
"""
import sys
from typing import Optional, TextIO

from config import ExitCode, ReportFormat, get_logger
from config.constants import ExtendTarget, Suite
from fibcat.exceptions import ExtensionFailure, NotInvertible
from fibcat.models.report import CheckReport, RunReport
from fibcat.services.extension import extended_instance
from fibcat.services.suites import SuiteRunner
from fibcat.utils import emit_instance, load_instance, render_run

logger = get_logger(__name__)

# Suites re-run on an extended instance
_VERIFY = {
    ExtendTarget.SKELETON: (Suite.MORPHISM, Suite.SKELETON),
    ExtendTarget.CORE: (Suite.MORPHISM, Suite.CORE),
    ExtendTarget.ETS_SKELETON: (Suite.ETS, Suite.ETS_SKELETON),
    ExtendTarget.ETC: (Suite.ETS, Suite.ETC),
}


class ExtendHandlers:
    """Handler for --extend."""

    def __init__(self, runner: SuiteRunner, out: Optional[TextIO] = None) -> None:
        self.runner = runner
        self.out = out

    def _emit(self, text: str) -> None:
        (self.out or sys.stdout).write(text)

    def extend(
        self,
        path: str,
        target: ExtendTarget,
        emit: Optional[str] = None,
        report_format: ReportFormat = ReportFormat.JSON,
    ) -> ExitCode:
        """
        Handle --extend: extend partial data to the full family and verify it.

        Args:
            path: Instance file
            target: Which partial structure to extend
            emit: Where to write the extended instance, if anywhere
            report_format: json or text

        Returns:
            OK if the extension exists and its verification suites pass

        Raises:
            ParseError: If the file does not load
            MissingData: If the instance lacks the partial structure
        """
        instance = load_instance(path)
        try:
            extended = extended_instance(instance, target)
        except (ExtensionFailure, NotInvertible) as e:
            logger.warning(f"{instance.name} does not extend along {target.value}: {e}")
            report = CheckReport(suite=f"extend-{target.value}")
            if isinstance(e, ExtensionFailure):
                report.add("extends", [instance.name], str(e))
                report.merge(e.report, "extend")
            else:
                report.add("extends", list(e.witness), str(e))
            run = RunReport(instance=instance.name, seed=instance.seed, reports=[report.sort()])
            self._emit(render_run(run, report_format))
            return ExitCode.CHECK_FAILED

        if emit:
            emit_instance(extended, emit)
        run = self.runner.run(extended, _VERIFY[target])
        self._emit(render_run(run, report_format))
        return ExitCode.OK if run.passed else ExitCode.CHECK_FAILED
