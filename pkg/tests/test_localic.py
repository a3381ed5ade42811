"""
Unit tests for the finite localic conditions.
"""
from dataclasses import replace

from fibcat.services.generators import strict_presheaf_instance
from fibcat.services.localic import check_localic_partial


def test_sheaf_fibers_over_powerset_are_localic(powerset2):
    """Test that functions on points over subsets pass every finite condition."""
    instance = strict_presheaf_instance(powerset2, "sheaf2", tensor=False, morphism=False)
    report = check_localic_partial(instance.localic("source"))
    assert report.passed
    assert report.laws == ["a", "b", "c-ff", "d"]
    assert report.notes


def test_constant_group_fibers_fail_initial_fiber(strict_group):
    """Test that a non-trivial fiber over the empty set violates condition (a) only."""
    report = check_localic_partial(strict_group.localic("source"))
    assert report.failing_laws() == ["a"]
    assert report.violations[0].witness == ("∅",)


def test_sheaf_fibers_over_long_chain_fail_conservativity(chain3):
    """Test that restriction to 1 and to 0 cannot see a change at the point 2."""
    instance = strict_presheaf_instance(chain3, "sheaf2", tensor=False, morphism=False)
    report = check_localic_partial(instance.localic("source"))
    assert report.failing_laws() == ["d"]
    assert report.violations[0].witness[:2] == ("1<=2", "0<=2")


def test_localic_data_needs_both_adjoint_families(strict_group):
    """Test that an instance side without adjoints has no localic data."""
    assert strict_group.localic("source") is not None
    bare = replace(strict_group, adjoints={})
    assert bare.localic("source") is None
