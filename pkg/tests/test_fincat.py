"""
Unit tests for finite categories, functors, transformations and pasting.
"""
import pytest

from fibcat.exceptions import BoundaryMismatch, DanglingId, NotIso, PastingTypeError, SourceInvalid
from fibcat.models.category import (
    NO_COMPOSITE,
    FinCat,
    FinFunctor,
    NatTrans,
    PastingStep,
    PastingTerm,
    compose_functors,
    objects_agree,
    same_functor,
)
from fibcat.models.product import PairFunctor, swap
from fibcat.services.fibered import single, step
from fibcat.services.fincat import (
    conjugate_functor,
    evaluate_pasting,
    validate_category,
    validate_functor,
    validate_nat_trans,
)
from fibcat.services.generators import fiber_category


@pytest.fixture
def chain():
    """The poset 0 <= 1 as a category."""
    return FinCat.thin("c", ["0", "1"], lambda a, b: a <= b)


def test_group_category_is_valid(bz3):
    """Test that BZ/3 passes every category law."""
    report = validate_category(bz3)
    assert report.passed
    assert "associativity" in report.laws


def test_corrupted_table_breaks_associativity(bz3):
    """Test that a wrong a∘a entry is caught by associativity."""
    a = bz3.morphism_index("a")
    broken = bz3.with_entry(a, a, a)
    report = validate_category(broken)
    assert not report.passed
    assert "associativity" in report.failing_laws()


def test_missing_composite_breaks_totality(chain):
    """Test that an undefined composite of a composable pair is reported."""
    f = chain.morphism_index("0<=1")
    broken = chain.with_entry(chain.identity(1), f, NO_COMPOSITE)
    report = validate_category(broken)
    assert report.failing_laws() == ["totality", "unit"]
    assert report.violations[0].witness == ("1<=1", "0<=1")
    assert "associativity" not in report.failing_laws()


def test_thin_category_names(chain):
    """Test arrow naming and hom-sets of a thin category."""
    f = chain.hom(0, 1)[0]
    assert chain.morphism_name(f) == "0<=1"
    assert chain.hom(1, 0) == ()
    assert chain.is_identity(chain.identity(0))
    assert not chain.is_iso(f)


def test_build_rejects_dangling_names():
    """Test that an undeclared object raises DanglingId."""
    with pytest.raises(DanglingId):
        FinCat.build("bad", ["A"], [("id_A", "A", "A"), ("f", "A", "B")])


def test_identity_functor_is_valid(bz3):
    """Test that the identity functor preserves composites."""
    assert validate_functor(FinFunctor.identity(bz3)).passed


def test_non_functor_fails_composition(bz3):
    """Test that e, a, a2 -> e, a, a is not a functor."""
    broken = FinFunctor(bz3, bz3, (0,), (0, 1, 1), "broken")
    report = validate_functor(broken)
    assert "composition" in report.failing_laws()


def test_functor_on_invalid_source_raises(bz3):
    """Test that functors are only validated between valid categories."""
    a = bz3.morphism_index("a")
    broken = bz3.with_entry(a, a, a)
    with pytest.raises(SourceInvalid):
        validate_functor(FinFunctor.identity(broken))


def test_component_count_is_checked(chain):
    """Test that a transformation needs one component per object."""
    F = FinFunctor.identity(chain)
    with pytest.raises(BoundaryMismatch):
        NatTrans(F, F, (chain.identity(0),))


def test_naturality_of_constant_transformation(chain):
    """Test that const[0] => const[1] along 0<=1 is natural."""
    low = FinFunctor.constant(chain, chain, 0)
    high = FinFunctor.constant(chain, chain, 1)
    f = chain.morphism_index("0<=1")
    t = NatTrans(low, high, (f, f), "up")
    assert validate_nat_trans(t).passed
    assert not t.is_iso()
    with pytest.raises(NotIso):
        t.inverse()


def test_pasting_must_chain(chain):
    """Test that appending a step that does not start at the previous end fails."""
    low = FinFunctor.constant(chain, chain, 0)
    high = FinFunctor.constant(chain, chain, 1)
    f = chain.morphism_index("0<=1")
    t = NatTrans(low, high, (f, f), "up")
    with pytest.raises(PastingTypeError):
        single(t) + single(t)


def _inversion(bz3):
    return FinFunctor(bz3, bz3, (0,), (0, 2, 1), "inv")


def test_pasting_checks_morphism_maps(bz3):
    """Test that steps whose functors agree on objects but not on morphisms do not chain."""
    F, G = FinFunctor.identity(bz3), _inversion(bz3)
    assert objects_agree(F, G)
    assert not same_functor(F, G)
    s, t = NatTrans.identity(F, "s"), NatTrans.identity(G, "t")
    with pytest.raises(PastingTypeError):
        single(s) + single(t)
    term = PastingTerm(F, G, (PastingStep(s, label="s"), PastingStep(t, label="t")), "mixed")
    with pytest.raises(PastingTypeError) as excinfo:
        evaluate_pasting(term)
    assert excinfo.value.step == 1


def test_thin_target_functors_compare_on_objects(chain):
    """Test that functors into a thin category are equal once their object maps are."""
    up = FinFunctor.constant(chain, chain, 1)
    again = FinFunctor(chain, chain, up.obj_map, up.mor_map, "again")
    assert chain.is_thin
    assert same_functor(up, again)
    assert not same_functor(up, FinFunctor.identity(chain))


def test_composite_tables_match_pointwise_values(bz3):
    """Test that tabulated composites agree with evaluating them one morphism at a time."""
    G = _inversion(bz3)
    lazy = compose_functors(G, G, G)
    values = [lazy.mor(f) for f in bz3.morphisms()]
    tabulated = compose_functors(G, G, G)
    assert list(tabulated.morphism_table()) == values == [0, 2, 1]
    assert tabulated.object_table() == (0,)
    assert same_functor(compose_functors(G, G), FinFunctor.identity(bz3))


def test_product_tables_match_pointwise_values(bz3, chain):
    """Test that pair and rebracketing functors tabulate to their pointwise values."""
    pair = PairFunctor(_inversion(bz3), FinFunctor.constant(chain, chain, 1))
    lazy = [pair.mor(f) for f in pair.source.morphisms()]
    fresh = PairFunctor(_inversion(bz3), FinFunctor.constant(chain, chain, 1))
    assert list(fresh.morphism_table()) == lazy
    assert list(fresh.object_table()) == [pair.obj(x) for x in pair.source.objects()]
    flip = swap(bz3, chain)
    assert list(flip.object_table()) == [swap(bz3, chain).obj(x) for x in flip.source.objects()]
    assert list(flip.morphism_table()) == [swap(bz3, chain).mor(f) for f in flip.source.morphisms()]


def test_pasting_with_inverse_is_identity(bz3):
    """Test that a step followed by its inverse evaluates to the identity."""
    F = FinFunctor.identity(bz3)
    t = NatTrans(F, F, (bz3.morphism_index("a"),), "a")
    result = evaluate_pasting(single(t) + step(t, inverted=True))
    assert result.is_identity()


def test_conjugation_in_abelian_group_is_trivial(bz3):
    """Test that conjugating the identity of BZ/3 leaves the morphism map unchanged."""
    F = FinFunctor.identity(bz3)
    conjugated, u = conjugate_functor(F, (bz3.morphism_index("a"),))
    assert conjugated.mor_map == F.mor_map
    assert u.components == (bz3.morphism_index("a"),)


def test_conjugation_in_symmetric_group_moves_morphisms():
    """Test that conjugating by a transposition changes a 3-cycle."""
    bs3 = fiber_category("bs3")
    F = FinFunctor.identity(bs3)
    conjugated, _ = conjugate_functor(F, (bs3.morphism_index("(12)"),))
    cycle = bs3.morphism_index("(123)")
    assert conjugated.mor(cycle) != cycle
    assert validate_functor(conjugated).passed


def test_conjugation_needs_automorphisms():
    """Test that a non-invertible monoid element is rejected."""
    mon2 = fiber_category("mon2")
    with pytest.raises(NotIso):
        conjugate_functor(FinFunctor.identity(mon2), (mon2.morphism_index("z"),))
