"""
Command-line tests: flags, exit codes and files written.
"""
import json

import pytest

from config import ExitCode
from fibcat.services.generators import MutationSpec, mutate_instance
from fibcat.utils import emit_instance, load_instance
from main import build_parser, main


def test_parser_requires_one_action():
    """Test that exactly one of the action flags is required."""
    with pytest.raises(SystemExit):
        build_parser().parse_args([])
    with pytest.raises(SystemExit):
        build_parser().parse_args(["--check", "all", "--gen", "strict"])


def test_gen_single_strict_instance(tmp_path, capsys):
    """Test that --gen strict with a blueprint writes one named instance."""
    code = main(["--gen", "strict", "--base", "chain2", "--fiber", "bz2", "--out", str(tmp_path)])
    assert code == ExitCode.OK
    summary = json.loads(capsys.readouterr().out)
    assert summary["mode"] == "strict"
    assert summary["files"] == [str(tmp_path / "chain2-bz2-strict.json")]
    assert load_instance(tmp_path / "chain2-bz2-strict.json").name == "chain2-bz2-strict"


def test_check_passing_instance(tmp_path, capsys, strict_thin):
    """Test that a passing instance exits 0 and prints a JSON report."""
    path = emit_instance(strict_thin, tmp_path / "thin.json")
    assert main(["--check", "all", str(path)]) == ExitCode.OK
    report = json.loads(capsys.readouterr().out)
    assert report["instance"] == strict_thin.name
    assert report["passed"] is True


def test_check_text_format(tmp_path, capsys, strict_thin):
    """Test the text report."""
    path = emit_instance(strict_thin, tmp_path / "thin.json")
    assert main(["--check", "category", "--format", "text", str(path)]) == ExitCode.OK
    assert strict_thin.name in capsys.readouterr().out


def test_check_failing_mutant(tmp_path, strict_group):
    """Test that a mutant exits 1."""
    mutant = mutate_instance(strict_group, MutationSpec("theta", ("∅<=1",), "*", "a"))
    path = emit_instance(mutant, tmp_path / "mutant.json")
    assert main(["--check", "morphism", str(path)]) == ExitCode.CHECK_FAILED


def test_check_missing_instance(tmp_path, capsys):
    """Test that an unreadable instance exits 2 with a message."""
    assert main(["--check", "all", str(tmp_path / "absent.json")]) == ExitCode.INPUT_ERROR
    assert "error:" in capsys.readouterr().err


def test_check_without_instance():
    """Test that --check needs an instance path."""
    assert main(["--check", "all"]) == ExitCode.INPUT_ERROR


def test_sweep(tmp_path, strict_thin, strict_group):
    """Test that a sweep skips underscore files and fails on unreadable ones."""
    emit_instance(strict_thin, tmp_path / "a.json")
    emit_instance(strict_group, tmp_path / "b.json")
    (tmp_path / "_index.json").write_text("not an instance", encoding="utf-8")
    assert main(["--sweep", str(tmp_path), "--suite", "category"]) == ExitCode.OK

    (tmp_path / "broken.json").write_text("{", encoding="utf-8")
    assert main(["--sweep", str(tmp_path), "--suite", "category"]) == ExitCode.CHECK_FAILED


def test_sweep_missing_directory(tmp_path):
    """Test that sweeping a missing directory is an input error."""
    assert main(["--sweep", str(tmp_path / "nowhere")]) == ExitCode.INPUT_ERROR


def test_extend_skeleton_and_emit(tmp_path, twisted):
    """Test that --extend writes an instance carrying the full θ."""
    path = emit_instance(twisted, tmp_path / "twisted.json")
    out = tmp_path / "out" / "extended.json"
    assert main(["--extend", "skeleton", str(path), "--emit", str(out)]) == ExitCode.OK
    extended = load_instance(out)
    assert extended.morphism.theta is not None
    for f, theta in twisted.oracle.theta.items():
        assert extended.morphism.theta[f] == theta


def test_gen_mutate(tmp_path, capsys):
    """Test that --gen mutate writes the mutants and the undetectable index."""
    code = main(["--gen", "mutate", "--seed", "2", "--count", "3", "--out", str(tmp_path)])
    assert code == ExitCode.OK
    summary = json.loads(capsys.readouterr().out)
    assert summary["seed"] == 2
    assert len(summary["files"]) == 4
    assert (tmp_path / "_undetectable.json").exists()
