"""
Unit tests for adjunctions, opposite-variance connections and transposition.
"""
import pytest

from fibcat.models.adjoint import Adjunction
from fibcat.services.adjoint import (
    beck_chevalley,
    check_adjunction,
    check_assignment,
    check_opposite_fibered,
    check_theta_transpose,
    derive_opposite_conn,
    transpose_back_theta,
    transpose_theta,
)
from fibcat.services.generators import thin_counterexample_instance


def test_identity_adjunction(bz3):
    """Test that the identity adjunction satisfies both triangle identities."""
    report = check_adjunction(Adjunction.identity(bz3))
    assert report.passed
    assert report.laws == ["triangle-left", "triangle-right"]


def test_bad_unit_breaks_triangles(bz3):
    """Test that a non-identity unit on the identity adjunction is caught."""
    adjunction = Adjunction.identity(bz3)
    bad = Adjunction(
        adjunction.left,
        adjunction.right,
        adjunction.unit.replace(0, bz3.morphism_index("a")),
        adjunction.counit,
        "bad",
    )
    report = check_adjunction(bad)
    assert report.failing_laws() == ["triangle-left", "triangle-right"]
    assert report.violations[0].witness == ("bad", "*")


@pytest.mark.parametrize("fixture", ["strict_group", "strict_thin"])
def test_strict_assignments_are_adjunctions(fixture, request):
    """Test that the strict adjoint families pass the leg and triangle checks."""
    instance = request.getfixturevalue(fixture)
    adjoints = instance.side_adjoints("source")
    for assign in (adjoints.smooth_left, adjoints.closed_right):
        assert check_assignment(assign).passed
        assert check_opposite_fibered(instance.source, assign).passed


def test_opposite_structure_has_direct_variance(strict_thin):
    """Test that the derived structure covers exactly the marked morphisms."""
    from config.constants import Variance

    assign = strict_thin.side_adjoints("source").smooth_left
    opposite = derive_opposite_conn(strict_thin.source, assign)
    assert opposite.variance == Variance.DIRECT
    assert opposite.name == "H#"
    assert opposite.scope == frozenset(assign.morphisms())


def test_strict_theta_transposes_both_ways(strict_thin):
    """Test that the identity θ is left and right adjointable and round-trips."""
    m = strict_thin.fib_morphism()
    for pair in (strict_thin.smooth_left_pair(), strict_thin.closed_right_pair()):
        report = check_theta_transpose(m, *pair)
        assert report.passed
        assert any(law.startswith("opposite-") for law in report.laws)


def test_twisted_theta_round_trips(twisted_full):
    """Test that θ -> θ-bar -> θ is the identity on a twisted instance."""
    m = twisted_full.fib_morphism()
    transpose = transpose_theta(m, *twisted_full.smooth_left_pair())
    assert transpose.adjointable
    back = transpose_back_theta(m, transpose.family, *twisted_full.smooth_left_pair())
    assert all(back[f] == m.theta_at(f) for f in back)


def test_counterexample_is_not_right_adjointable():
    """Test that collapsing onto the bottom makes the closed θ fail right-adjointability."""
    instance = thin_counterexample_instance("right")
    m = instance.fib_morphism()
    right = check_theta_transpose(m, *instance.closed_right_pair())
    assert right.failing_laws() == ["adjointable-right"]
    assert right.violations[0].witness == ("R", "0<=1")
    assert check_theta_transpose(m, *instance.smooth_left_pair()).passed
    assert instance.morphism.theta_cl_bar is None


def test_counterexample_is_not_left_adjointable():
    """Test that collapsing onto the top makes the smooth θ fail left-adjointability."""
    instance = thin_counterexample_instance("left")
    m = instance.fib_morphism()
    left = check_theta_transpose(m, *instance.smooth_left_pair())
    assert left.failing_laws() == ["adjointable-left"]
    assert check_theta_transpose(m, *instance.closed_right_pair()).passed
    assert instance.morphism.theta_cl_bar is not None


def test_beck_chevalley_on_strict_pullback(strict_group):
    """Test that the base change map of the intersection square is invertible."""
    cat = strict_group.base.cat
    square = (
        cat.morphism_index("∅<=1"),
        cat.morphism_index("∅<=2"),
        cat.morphism_index("2<=12"),
        cat.morphism_index("1<=12"),
    )
    assign = strict_group.side_adjoints("source").smooth_left
    result, invertible = beck_chevalley(strict_group.source, square, assign)
    assert invertible
    assert result.is_identity()
