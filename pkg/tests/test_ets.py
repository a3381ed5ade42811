"""
Unit tests for external tensor structures, their skeleta and cores, and ρ.
"""
import pytest

from fibcat.exceptions import IndependenceFailure
from fibcat.services.ets import (
    check_constraints,
    check_etc,
    check_ets_CT,
    check_ets_skeleton,
    check_m_transpose,
    check_mets,
    check_mor_etc,
    check_mor_ets,
    check_mor_ets_skeleton,
    check_projection_formula,
    check_skeleton_constraints,
    ets_agreement,
    ets_core_to_skeleton,
    ets_skeleton_to_core,
    extend_ets_skeleton,
    path_m_value,
    restrict_ets,
    transport_constraints,
    transport_rho,
    transpose_back_m,
    transpose_m,
)
from fibcat.services.generators import MutationSpec, mutate_instance, strict_presheaf_instance


@pytest.fixture(scope="module")
def strict_chain_group(chain2):
    """Strict BZ/3 instance over chain2 with tensor structure and ρ."""
    return strict_presheaf_instance(chain2, "bz3")


def test_strict_tensor_structure(strict_thin, strict_chain_group):
    """Test that identity m, a and c pass every tensor check."""
    for instance in (strict_thin, strict_chain_group):
        e = instance.ets("source")
        assert check_mets(e).passed
        report = check_constraints(e, *instance.constraints("source"))
        assert report.passed
        assert {"aETS-1", "aETS-2", "cETS-1", "cETS-2"} <= set(report.laws)


def test_identity_pair_m_must_be_identity(strict_chain_group):
    """Test that m along a pair of identities is pinned by monoidality."""
    mutant = mutate_instance(strict_chain_group, MutationSpec("source.m", ("0<=0", "0<=0"), "*|*", "a"))
    report = check_mets(mutant.ets("source"))
    assert report.failing_laws() == ["mETS"]
    assert mutant.mutation.covered


def test_restricted_strict_structure_is_a_skeleton(strict_chain_group):
    """Test that restricting m gives a tensor skeleton passing the exchange condition."""
    skeleton = restrict_ets(strict_chain_group.ets("source"))
    report = check_ets_skeleton(skeleton)
    assert report.passed
    assert "ex-ETS-1" in report.laws


def test_twisted_tensor_skeleton_extends_to_oracle(twisted):
    """Test that the unique extension of a twisted tensor skeleton reproduces the transported m."""
    skeleton = twisted.ets_skeleton("source")
    assert check_ets_skeleton(skeleton).passed
    assert ets_agreement(skeleton) == (True, True)
    extended = extend_ets_skeleton(skeleton)
    oracle = twisted.oracle.m
    assert set(extended.m) == set(oracle)
    for key, m in oracle.items():
        assert extended.m[key] == m


def test_skeleton_constraints_include_lifted(twisted):
    """Test that constraints are checked on both parts and on the extension."""
    report = check_skeleton_constraints(twisted.ets_skeleton("source"), *twisted.constraints("source"))
    assert report.passed
    assert any(law.startswith("lifted:") for law in report.laws)


def test_disagreeing_tensor_parts_do_not_extend(strict_chain_group):
    """Test that a corrupted m^sm fails its own axioms and breaks independence."""
    mutant = mutate_instance(strict_chain_group, MutationSpec("source.m_sm", ("0<=1", "0<=1"), "*|*", "a"))
    skeleton = mutant.ets_skeleton("source")
    report = check_ets_skeleton(skeleton)
    assert "sm:mETS" in report.failing_laws()
    assert report.skipped == ["ex-ETS-1: subcategory structures fail their axioms"]
    with pytest.raises(IndependenceFailure):
        extend_ets_skeleton(skeleton)


def test_tensor_core_round_trip(twisted):
    """Test that tensor skeleton -> core -> skeleton preserves m^cl and the core passes."""
    skeleton = twisted.ets_skeleton("source")
    adjoints = twisted.side_adjoints("source")
    core = ets_skeleton_to_core(skeleton, adjoints.closed_right, adjoints.smooth_left)
    assert check_etc(core).passed
    back = ets_core_to_skeleton(core)
    for key, m in skeleton.m_cl.items():
        assert back.m_cl[key] == m


def test_strict_m_transposes(strict_thin):
    """Test adjointability, roundtrip and projection formula of the identity m."""
    e = strict_thin.ets("source")
    adjoints = strict_thin.side_adjoints("source")
    report = check_m_transpose(e, adjoints.smooth_left)
    assert report.passed
    assert any(law.startswith("m-opposite-left:") for law in report.laws)
    assert check_projection_formula(e, adjoints.smooth_left).passed
    assert transport_constraints(e, *strict_thin.constraints("source"), adjoints.smooth_left).passed


def test_strict_rho(strict_chain_group):
    """Test that the identity ρ satisfies the hexagon and transports along adjoints."""
    r = strict_chain_group.mor_ets()
    report = check_mor_ets(r)
    assert report.passed
    assert report.laws == ["rho-boundary", "rho-iso", "mor-ETS"]
    assert check_mor_ets_skeleton(strict_chain_group.mor_ets_skeleton()).passed
    assert transport_rho(r, [strict_chain_group.smooth_left_pair()]).passed


def test_twisted_rho(twisted_full):
    """Test that the transported ρ satisfies the hexagon."""
    assert check_mor_ets(twisted_full.mor_ets()).passed


def test_corrupted_rho_breaks_hexagon(strict_chain_group):
    """Test that changing one ρ component is seen by the hexagon."""
    mutant = mutate_instance(strict_chain_group, MutationSpec("rho", ("0", "1"), "*|*", "a"))
    report = check_mor_ets(mutant.mor_ets())
    assert report.failing_laws() == ["mor-ETS"]


def test_tensor_ct_split(twisted):
    """Test that the C/T form of the tensor exchange condition passes where the exchange form does."""
    report = check_ets_CT(twisted.ets_skeleton("source"))
    assert report.passed
    assert {"C-ETS-1", "T-ETS-1"} <= set(report.laws)


def test_right_transpose_of_m_round_trips(strict_chain_group):
    """Test that m-bar along right adjoints exists on group fibers and transposes back to m."""
    e = strict_chain_group.ets("source")
    assign = strict_chain_group.side_adjoints("source").closed_right
    transpose = transpose_m(e, assign)
    assert transpose.adjointable
    assert transpose.family
    for key, m in transpose_back_m(e, transpose.family, assign).items():
        assert m == e.m[key]


def test_strict_rho_core(strict_chain_group):
    """Test ρ on the tensor core: the smooth and closed parts agree and both hexagons hold."""
    r = strict_chain_group.mor_etc()
    assert r is not None
    assert check_mor_etc(r).passed


def test_evaluated_paths_are_memoised(strict_chain_group):
    """Test that a path of m is evaluated once per host and equals m on a single leg."""
    e = strict_chain_group.ets("source")
    f = e.host.base.cat.morphism_index("0<=1")
    legs = [(f, f, e.m)]
    value = path_m_value(e, legs)
    assert path_m_value(e, legs) is value
    assert value == e.m[(f, f)]


def test_extension_is_shared_between_equal_skeleta(twisted):
    """Test that extending the same families twice returns the same structure."""
    first = extend_ets_skeleton(twisted.ets_skeleton("source"))
    assert extend_ets_skeleton(twisted.ets_skeleton("source")) is first
