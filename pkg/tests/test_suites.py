"""
Unit tests for suite selection and the suite runner.
"""
import pytest

from config.constants import DEFAULT_SUITES, SUITE_ORDER, Suite
from fibcat.exceptions import CompositionUndefined
from fibcat.models.report import CheckReport
from fibcat.services.generators import MutationSpec, build_corpus, mutate_instance, mutation_battery
from fibcat.services.suites import check_instance, resolve_suites
from fibcat.utils.decorators import suite_guard


def test_resolve_suites():
    """Test that 'all' expands to the default suites and names select one suite."""
    assert resolve_suites("all") == DEFAULT_SUITES
    assert resolve_suites("core") == (Suite.CORE,)
    assert Suite.LOCALIC not in DEFAULT_SUITES
    assert Suite.COHERENCE not in DEFAULT_SUITES
    with pytest.raises(ValueError):
        resolve_suites("everything")


def test_strict_instance_passes_default_suites(runner, strict_group):
    """Test that a strict instance passes every default suite."""
    run = runner.run(strict_group)
    assert run.passed, [r.to_dict() for r in run.reports if not r.passed]
    assert [r.suite for r in run.reports] == [s.value for s in DEFAULT_SUITES]
    assert set(run.timings) == {s.value for s in DEFAULT_SUITES}


def test_twisted_instance_passes_default_suites(runner, twisted):
    """Test that a twisted instance extends, agrees with its oracle and passes."""
    run = runner.run(twisted)
    assert run.passed, [r.to_dict() for r in run.reports if not r.passed]
    assert run.seed == 11


def test_reports_follow_suite_order(runner, strict_thin):
    """Test that reports come back in suite order whatever the request order."""
    run = runner.run(strict_thin, [Suite.ADJOINT, Suite.CATEGORY, Suite.BASE])
    assert [r.suite for r in run.reports] == ["category", "base", "adjoint"]
    assert SUITE_ORDER.index(Suite.CATEGORY) < SUITE_ORDER.index(Suite.ADJOINT)


def test_all_inside_a_list_expands(runner, strict_thin):
    """Test that Suite.ALL among explicit suites expands to the defaults."""
    run = runner.run(strict_thin, [Suite.ALL, Suite.LOCALIC])
    assert [r.suite for r in run.reports][-2:] == ["localic", "adjoint"]


def test_mutant_fails_morphism_suite(runner, strict_group):
    """Test that a corrupted θ component fails the morphism suite."""
    mutant = mutate_instance(strict_group, MutationSpec("theta", ("∅<=1",), "*", "a"))
    run = runner.run(mutant, [Suite.MORPHISM])
    assert not run.passed
    assert "mor" in run.reports[0].failing_laws()


def test_opt_in_localic_suite(runner, strict_group):
    """Test that the localic suite reports the nontrivial initial fiber."""
    report = runner.run(strict_group, [Suite.LOCALIC]).reports[0]
    assert not report.passed
    assert any(law.split(":")[-1] == "a" for law in report.failing_laws())


def test_check_instance_uses_configured_workers(strict_thin):
    """Test the module-level entry point."""
    run = check_instance(strict_thin, (Suite.CATEGORY,))
    assert run.passed
    assert run.instance == strict_thin.name


def test_suite_guard_turns_errors_into_reports():
    """Test that engine errors inside a suite give a failing report."""

    @suite_guard("demo")
    def broken(_instance):
        raise CompositionUndefined("f and g do not compose")

    report = broken(None)
    assert isinstance(report, CheckReport)
    assert report.suite == "demo"
    assert report.failing_laws() == ["error"]
    assert report.violations[0].witness == ("CompositionUndefined",)


@pytest.mark.slow
def test_every_corpus_instance_passes(runner, test_settings):
    """Test that every strict and twisted corpus instance passes the default suites."""
    corpus = build_corpus(test_settings.default_seed)
    assert len(corpus) >= 40
    failing = [i.name for i in corpus if not runner.run(i).passed]
    assert failing == []


@pytest.mark.slow
def test_every_covered_mutant_fails(runner, test_settings):
    """Test that each mutant inside an enumerated diagram fails some default suite."""
    battery = mutation_battery(test_settings.default_seed, 100)
    covered = [i for i in battery.instances if i.mutation.covered]
    assert len(battery.instances) == 100
    assert len(covered) + len(battery.undetectable) == 100
    missed = [i.name for i in covered if runner.run(i).passed]
    assert missed == []
