"""
Check reports: violations with witnesses, per-suite verdicts and run summaries.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Tuple


@dataclass(frozen=True, order=True)
class Violation:
    """A failed law with the ids (by name) that witness it."""

    law: str
    witness: Tuple[str, ...]
    detail: str = ""
    trace: Tuple[str, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"law": self.law, "witness": list(self.witness)}
        if self.detail:
            data["detail"] = self.detail
        if self.trace:
            data["trace"] = list(self.trace)
        return data


@dataclass
class CheckReport:
    """Outcome of one suite or one check operation."""

    suite: str
    violations: List[Violation] = field(default_factory=list)
    laws: List[str] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    skipped: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def law(self, name: str) -> None:
        """Record that a law was checked."""
        if name not in self.laws:
            self.laws.append(name)

    def add(
        self,
        law: str,
        witness: Iterable[str],
        detail: str = "",
        trace: Iterable[str] = (),
    ) -> None:
        self.law(law)
        self.violations.append(Violation(law, tuple(witness), detail, tuple(trace)))

    def note(self, message: str) -> None:
        self.notes.append(message)

    def skip(self, reason: str) -> None:
        self.skipped.append(reason)

    def verdict(self, law: str) -> bool:
        """True if no violation of the given law was recorded."""
        return not any(v.law == law for v in self.violations)

    def failing_laws(self) -> List[str]:
        return sorted({v.law for v in self.violations})

    def merge(self, other: CheckReport, prefix: Optional[str] = None) -> CheckReport:
        """Fold another report into this one, optionally prefixing its law names."""

        def rename(law: str) -> str:
            return f"{prefix}:{law}" if prefix else law

        for law in other.laws:
            self.law(rename(law))
        for v in other.violations:
            self.violations.append(Violation(rename(v.law), v.witness, v.detail, v.trace))
        self.notes.extend(other.notes)
        self.skipped.extend(other.skipped)
        return self

    def sort(self) -> CheckReport:
        self.violations.sort()
        return self

    def to_dict(self, max_violations: Optional[int] = None) -> Dict[str, Any]:
        violations = sorted(self.violations)
        shown = violations if max_violations is None else violations[:max_violations]
        return {
            "suite": self.suite,
            "passed": self.passed,
            "laws": {law: self.verdict(law) for law in sorted(self.laws)},
            "violation_count": len(violations),
            "violations": [v.to_dict() for v in shown],
            "notes": list(self.notes),
            "skipped": list(self.skipped),
        }


@dataclass
class RunReport:
    """Everything a single command-line invocation produced."""

    instance: str
    seed: Optional[int] = None
    reports: List[CheckReport] = field(default_factory=list)
    timings: Dict[str, float] = field(default_factory=dict)
    errors: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.errors and all(r.passed for r in self.reports)

    def to_dict(
        self, include_timings: bool = False, max_violations: Optional[int] = 50
    ) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "instance": self.instance,
            "seed": self.seed,
            "passed": self.passed,
            "suites": [r.to_dict(max_violations) for r in self.reports],
        }
        if self.errors:
            data["errors"] = list(self.errors)
        if include_timings:
            data["timings"] = {k: round(v, 4) for k, v in sorted(self.timings.items())}
        return data


@dataclass
class SweepRow:
    """One instance file of a directory sweep."""

    path: str
    instance: str
    passed: bool
    failing: List[str] = field(default_factory=list)
    error: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "path": self.path,
            "instance": self.instance,
            "passed": self.passed,
            "failing": list(self.failing),
        }
        if self.error:
            data["error"] = self.error
        return data
