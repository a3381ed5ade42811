"""
Unit tests for fibered categories and their morphisms.
"""
from config.constants import Marked
from fibcat.services.fibered import (
    bracketings,
    check_coherence,
    check_fib_axioms,
    check_mor_axioms,
    identity_morphism,
    restrict,
    unfold,
)
from fibcat.services.fincat import evaluate_pasting
from fibcat.services.generators import MutationSpec, mutate_instance, strict_presheaf_instance


def test_strict_instance_is_fibered(strict_group, strict_thin):
    """Test that identity connections satisfy every fibered-category axiom."""
    for instance in (strict_group, strict_thin):
        report = check_fib_axioms(instance.source)
        assert report.passed
        assert "fib-1" in report.laws


def test_strict_morphism_satisfies_axioms(strict_group):
    """Test that the identity θ family is a morphism."""
    report = check_mor_axioms(strict_group.fib_morphism())
    assert report.passed
    assert report.laws == ["mor-iso", "mor", "mor-id"]


def test_twisted_instance_is_fibered(twisted_full):
    """Test that twisting transports the axioms to both sides and the morphism."""
    assert check_fib_axioms(twisted_full.source).passed
    assert check_fib_axioms(twisted_full.side("target")).passed
    assert check_mor_axioms(twisted_full.fib_morphism()).passed


def test_identity_leg_connection_must_be_identity(strict_group):
    """Test that a non-identity connection with an identity leg fails conn-unit."""
    mutant = mutate_instance(strict_group, MutationSpec("source.conn", ("∅<=1", "1<=1"), "*", "a"))
    report = check_fib_axioms(mutant.source)
    assert report.failing_laws() == ["conn-unit"]
    assert report.skipped == ["fib-1: connection data malformed"]


def test_non_invertible_connection_fails_iso(chain2):
    """Test that a monoid connection component without inverse is reported."""
    strict = strict_presheaf_instance(chain2, "mon2")
    mutant = mutate_instance(strict, MutationSpec("source.conn", ("0<=1", "1<=1"), "*", "z"))
    report = check_fib_axioms(mutant.source)
    assert "conn-iso" in report.failing_laws()
    assert mutant.mutation.covered


def test_corrupted_theta_breaks_composition(strict_group):
    """Test that changing θ along one arrow breaks the composite law."""
    mutant = mutate_instance(strict_group, MutationSpec("theta", ("∅<=1",), "*", "a"))
    report = check_mor_axioms(mutant.fib_morphism())
    assert report.failing_laws() == ["mor"]
    assert any(v.witness[1] == "∅<=1" for v in report.violations)


def test_corrupted_theta_on_identity(strict_group):
    """Test that θ along an identity must be the identity."""
    mutant = mutate_instance(strict_group, MutationSpec("theta", ("1<=1",), "*", "a2"))
    assert "mor-id" in check_mor_axioms(mutant.fib_morphism()).failing_laws()


def test_coherence_on_strict_chain(chain3):
    """Test that every bracketing of every quadruple agrees on a strict instance."""
    strict = strict_presheaf_instance(chain3, "bz2", tensor=False)
    report = check_coherence(strict.source)
    assert report.passed
    assert report.laws == ["coherence"]


def test_bracketings_of_four_leaves():
    """Test that four leaves have five bracketings."""
    trees = bracketings([0, 1, 2, 3])
    assert len(trees) == 5
    assert len(set(trees)) == 5


def test_unfolding_a_strict_path_is_identity(strict_thin):
    """Test that unfolding over a path of identity connections evaluates to the identity."""
    h = strict_thin.source
    cat = h.base.cat
    path = [cat.identity(0), cat.morphism_index("0<=1"), cat.identity(1)]
    assert evaluate_pasting(unfold(h, path)).is_identity()


def test_restriction_keeps_marked_scope(strict_group):
    """Test that restricting to smooth morphisms keeps exactly those."""
    h = strict_group.source
    smooth = restrict(h, Marked.SMOOTH)
    assert smooth.scope == h.base.smooth
    assert all(f in smooth.scope and g in smooth.scope for f, g in smooth.conn)


def test_identity_morphism(strict_thin):
    """Test that the identity morphism of a fibered category is a morphism."""
    assert check_mor_axioms(identity_morphism(strict_thin.source)).passed
