"""
Report rendering: sorted-key JSON and human-readable text.
"""
import json
from typing import Any, List, Optional, Sequence

from config.constants import MARKS, MAX_VIOLATIONS_SHOWN, ReportFormat
from fibcat.models.report import CheckReport, RunReport, SweepRow


def format_json(data: Any) -> str:
    """Deterministic JSON: sorted keys, two-space indent, UTF-8 kept as is."""
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _mark(passed: bool) -> str:
    return MARKS["pass"] if passed else MARKS["fail"]


def format_duration(seconds: float) -> str:
    """
    Format a duration for reports.

    Args:
        seconds: Duration in seconds

    Returns:
        Formatted string (e.g., "850ms", "2.41s", "3m 12s")
    """
    if seconds < 1:
        return f"{seconds * 1000:.0f}ms"
    if seconds < 60:
        return f"{seconds:.2f}s"
    minutes, rest = divmod(int(seconds), 60)
    return f"{minutes}m {rest}s"


def format_check_report(report: CheckReport, max_violations: Optional[int] = MAX_VIOLATIONS_SHOWN) -> str:
    """
    Format one suite report.

    Args:
        report: Suite report
        max_violations: Violations listed before truncating

    Returns:
        Multi-line text block
    """
    lines = [f"{_mark(report.passed)} {report.suite}"]
    failing = set(report.failing_laws())
    for law in sorted(report.laws):
        lines.append(f"   {_mark(law not in failing)} {law}")
    violations = sorted(report.violations)
    shown = violations if max_violations is None else violations[:max_violations]
    for v in shown:
        witness = " / ".join(v.witness) or "-"
        detail = f"  ({v.detail})" if v.detail else ""
        lines.append(f"      └ {v.law}: {witness}{detail}")
        for step in v.trace:
            lines.append(f"          {step}")
    if len(shown) < len(violations):
        lines.append(f"      └ ... {len(violations) - len(shown)} more")
    for reason in report.skipped:
        lines.append(f"   {MARKS['skip']} {reason}")
    for note in report.notes:
        lines.append(f"   {MARKS['note']} {note}")
    return "\n".join(lines)


def format_run_report(
    run: RunReport, include_timings: bool = False, max_violations: Optional[int] = MAX_VIOLATIONS_SHOWN
) -> str:
    """
    Format everything one invocation produced.

    Args:
        run: Run report
        include_timings: Append per-suite wall-clock times
        max_violations: Violations listed per suite

    Returns:
        Text report ending in a newline
    """
    header = f"{_mark(run.passed)} {run.instance}"
    if run.seed is not None:
        header += f" (seed {run.seed})"
    blocks: List[str] = [header]
    for error in run.errors:
        blocks.append(f"{MARKS['error']} {error}")
    for report in run.reports:
        block = format_check_report(report, max_violations)
        if include_timings and report.suite in run.timings:
            block += f"\n   {format_duration(run.timings[report.suite])}"
        blocks.append(block)
    return "\n".join(blocks) + "\n"


def format_sweep(rows: Sequence[SweepRow]) -> str:
    """
    Format a directory sweep as a summary table.

    Args:
        rows: One row per instance file

    Returns:
        Text table ending in a newline
    """
    width = max([len(r.path) for r in rows] + [4])
    lines = [f"{'file':<{width}}  status  failing", "-" * (width + 24)]
    for row in rows:
        if row.error:
            status, detail = MARKS["error"], row.error
        else:
            status, detail = _mark(row.passed), ", ".join(row.failing) or "-"
        lines.append(f"{row.path:<{width}}  {status}      {detail}")
    passed = sum(1 for r in rows if r.passed)
    lines.append(f"{passed}/{len(rows)} passed")
    return "\n".join(lines) + "\n"


def render_run(run: RunReport, report_format: ReportFormat, include_timings: bool = False) -> str:
    """Render a run report in the requested format."""
    if report_format == ReportFormat.TEXT:
        return format_run_report(run, include_timings)
    return format_json(run.to_dict(include_timings, MAX_VIOLATIONS_SHOWN))


def render_sweep(rows: Sequence[SweepRow], report_format: ReportFormat) -> str:
    """Render sweep rows in the requested format."""
    if report_format == ReportFormat.TEXT:
        return format_sweep(rows)
    return format_json({"instances": [r.to_dict() for r in rows], "passed": sum(1 for r in rows if r.passed)})
