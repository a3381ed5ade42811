"""
Unit tests for skeleta, cores and the factorization extension.
"""
import pytest

from fibcat.exceptions import IndependenceFailure, NotInvertible
from fibcat.services.generators import (
    MutationSpec,
    mutate_instance,
    strict_presheaf_instance,
    thin_counterexample_instance,
)
from fibcat.services.skeleton import (
    check_core,
    check_skeleton,
    check_skeleton_CT,
    core_to_skeleton,
    extend_skeleton,
    restrict_to_skeleton,
    skeleton_agreement,
    skeleton_to_core,
)


def test_strict_skeleton_passes(strict_group):
    """Test that the identity skeleton satisfies the exchange condition."""
    report = check_skeleton(strict_group.skeleton())
    assert report.passed
    assert {"coincide", "ex", "sm:mor", "cl:mor"} <= set(report.laws)


def test_exchange_and_ct_agree(strict_group, twisted):
    """Test that the exchange check and the C/T check give the same verdict."""
    for instance in (strict_group, twisted):
        assert skeleton_agreement(instance.skeleton()) == (True, True)


def test_twisted_skeleton_extends_to_oracle(twisted):
    """Test that the unique extension of a twisted skeleton reproduces the transported θ."""
    extended = extend_skeleton(twisted.skeleton())
    oracle = twisted.oracle.theta
    assert set(extended.theta) == set(oracle)
    for f, theta in oracle.items():
        assert extended.theta[f] == theta


def test_restricting_an_extension_gives_the_skeleton(twisted):
    """Test that extend then restrict returns the original families."""
    skeleton = twisted.skeleton()
    restricted = restrict_to_skeleton(extend_skeleton(skeleton))
    for f, theta in skeleton.theta_sm.items():
        assert restricted.theta_sm[f] == theta
    for f, theta in skeleton.theta_cl.items():
        assert restricted.theta_cl[f] == theta


def test_disagreeing_parts_fail_coincide_and_independence(chain2):
    """Test that θ^sm != θ^cl on a doubly marked arrow is caught twice."""
    strict = strict_presheaf_instance(chain2, "bz3", tensor=False)
    mutant = mutate_instance(strict, MutationSpec("theta_sm", ("0<=1",), "*", "a"))
    assert "coincide" in check_skeleton(mutant.skeleton()).failing_laws()
    with pytest.raises(IndependenceFailure) as excinfo:
        extend_skeleton(mutant.skeleton())
    violation = excinfo.value.report.violations[0]
    assert violation.law == "independence"
    assert violation.witness[0] == "0<=1"


def test_corrupted_smooth_part_fails_its_axioms(strict_group):
    """Test that a broken θ^sm stops the check before the exchange condition."""
    mutant = mutate_instance(strict_group, MutationSpec("theta_sm", ("∅<=1",), "*", "a"))
    report = check_skeleton(mutant.skeleton())
    assert "sm:mor" in report.failing_laws()
    assert report.skipped == ["ex: subcategory structures fail their axioms"]
    assert not check_skeleton_CT(mutant.skeleton()).passed


def test_core_round_trip(twisted):
    """Test that skeleton -> core -> skeleton preserves θ^cl."""
    skeleton = twisted.skeleton()
    core = skeleton_to_core(skeleton, twisted.closed_right_pair(), twisted.smooth_left_pair())
    back = core_to_skeleton(core)
    for f, theta in skeleton.theta_cl.items():
        assert back.theta_cl[f] == theta


def test_twisted_core_passes(twisted):
    """Test that the stored core of a twisted instance satisfies C' and T."""
    report = check_core(twisted.core())
    assert report.passed
    assert {"adjointable-sm", "C'", "T"} <= set(report.laws)


def test_core_check_on_strict_thin(strict_thin):
    """Test that the strict thin core passes."""
    assert check_core(strict_thin.core()).passed


def test_non_adjointable_skeleton_has_no_core():
    """Test that the right-mode counterexample cannot be converted to a core."""
    instance = thin_counterexample_instance("right")
    assert check_skeleton(instance.skeleton()).passed
    assert instance.core() is None
    with pytest.raises(NotInvertible) as excinfo:
        skeleton_to_core(instance.skeleton(), instance.closed_right_pair(), instance.smooth_left_pair())
    assert excinfo.value.witness[0] == "0<=1"
