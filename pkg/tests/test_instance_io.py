"""
Unit tests for reading and writing instance files.
"""
import json

import pytest

from fibcat.exceptions import ParseError
from fibcat.services.fibered import check_fib_axioms, check_mor_axioms
from fibcat.services.generators import MutationSpec, mutate_instance
from fibcat.services.skeleton import extend_skeleton
from fibcat.utils import dump_instance, emit_instance, load_instance, parse_instance


def test_dump_is_stable_through_parse(strict_thin):
    """Test that parsing a dumped instance and dumping again gives the same text."""
    text = dump_instance(strict_thin)
    parsed = parse_instance(text)
    assert parsed.name == strict_thin.name
    assert dump_instance(parsed) == text


def test_parsed_instance_checks_like_the_original(strict_thin):
    """Test that the loaded structures pass the same axioms."""
    parsed = parse_instance(dump_instance(strict_thin))
    assert check_fib_axioms(parsed.source).passed
    assert check_mor_axioms(parsed.fib_morphism()).passed
    assert parsed.ets("source") is not None


def test_twisted_instance_keeps_oracle(twisted):
    """Test that a written twisted instance still extends to its oracle."""
    parsed = parse_instance(dump_instance(twisted))
    assert parsed.seed == 11
    assert parsed.morphism.theta is None
    extended = extend_skeleton(parsed.skeleton())
    for f, theta in parsed.oracle.theta.items():
        assert extended.theta[f] == theta


def test_mutation_record_survives(strict_group):
    """Test that the mutation block is written and read back."""
    mutant = mutate_instance(strict_group, MutationSpec("theta", ("∅<=1",), "*", "a"))
    parsed = parse_instance(dump_instance(mutant))
    assert parsed.mutation == mutant.mutation


def test_emit_and_load(tmp_path, strict_thin):
    """Test writing an instance file and loading it back."""
    path = emit_instance(strict_thin, tmp_path / "nested" / "thin.json")
    assert path.exists()
    assert load_instance(path).name == strict_thin.name


def test_malformed_json_reports_line():
    """Test that invalid JSON is reported with its line."""
    with pytest.raises(ParseError) as excinfo:
        parse_instance('{\n  "name": ', origin="broken.json")
    assert excinfo.value.path.startswith("broken.json:line")


def test_schema_version_is_checked(strict_thin):
    """Test that an unsupported schema version is rejected at its field."""
    payload = json.loads(dump_instance(strict_thin))
    payload["schema_version"] = 99
    with pytest.raises(ParseError) as excinfo:
        parse_instance(json.dumps(payload))
    assert excinfo.value.path == "schema_version"
    assert "unsupported schema version 99" in str(excinfo.value)


def test_unknown_keys_are_errors(strict_thin):
    """Test that the schema forbids unknown fields."""
    payload = json.loads(dump_instance(strict_thin))
    payload["colour"] = "blue"
    with pytest.raises(ParseError) as excinfo:
        parse_instance(json.dumps(payload))
    assert excinfo.value.path == "colour"


def test_dangling_names_are_errors(strict_thin):
    """Test that a reference to an undeclared object is a parse error."""
    payload = json.loads(dump_instance(strict_thin))
    payload["base"]["initial"] = "nowhere"
    with pytest.raises(ParseError):
        parse_instance(json.dumps(payload))


def test_missing_file():
    """Test that an unreadable path is a parse error."""
    with pytest.raises(ParseError) as excinfo:
        load_instance("/nonexistent/instance.json")
    assert "cannot read file" in str(excinfo.value)
