"""
Unit tests for base categories: hypotheses, pullbacks, factorizations and products.
"""
import pytest

from fibcat.exceptions import Disconnected, MissingComplement
from fibcat.models.base import BaseCat
from fibcat.models.category import FinCat
from fibcat.models.report import CheckReport
from fibcat.services.base import (
    cartesian_squares,
    check_hyp_core,
    check_hyp_skel,
    check_products,
    check_pullbacks,
    fact_category,
    fact_connectivity,
    missing_pullbacks,
    product_of_morphisms,
    pullback,
    tau,
    triangles,
    with_marking,
)


def _identities(b: BaseCat) -> frozenset:
    return frozenset(b.cat.identity(x) for x in b.cat.objects())


def test_chain_and_powerset_satisfy_hypotheses(chain2, powerset2):
    """Test that the standard bases pass every hypothesis."""
    for b in (chain2, powerset2):
        assert check_hyp_skel(b).passed
        assert check_hyp_core(b).passed
        assert check_products(b).passed


def test_powerset_pullback_is_intersection(powerset2):
    """Test that 1 and 2 pull back over 12 to the empty set."""
    cat = powerset2.cat
    p = cat.morphism_index("1<=12")
    f = cat.morphism_index("2<=12")
    pb = pullback(powerset2, p, f)
    assert cat.object_name(pb.apex) == "∅"
    assert cat.morphism_name(pb.over_f) == "∅<=1"
    assert cat.morphism_name(pb.over_p) == "∅<=2"


def test_pullback_along_identity_is_trivial(chain2):
    """Test that pulling back along an identity returns the other leg."""
    cat = chain2.cat
    f = cat.morphism_index("0<=1")
    pb = pullback(chain2, cat.identity(1), f)
    assert pb.apex == 0
    assert pb.over_f == f


def test_fact_category_of_chain_arrow(chain2):
    """Test that 0<=1 has two factorizations joined by one arrow."""
    cat = chain2.cat
    f = cat.morphism_index("0<=1")
    fc = fact_category(chain2, f)
    assert [cat.object_name(o.mid) for o in fc.objects] == ["0", "1"]
    assert [(a.source, a.target) for a in fc.arrows if a.source != a.target] == [(0, 1)]
    report = fact_connectivity(fc, chain2)
    assert report.passed
    assert "2 objects" in report.notes[0]


def test_identities_only_marking_has_no_factorizations(chain2):
    """Test that marking only identities breaks the factorization hypothesis."""
    ids = _identities(chain2)
    b = with_marking(chain2, ids, ids)
    report = check_hyp_skel(b)
    assert report.failing_laws() == ["hyp-iv"]
    assert report.violations[0].witness == ("0<=1",)

    fc = fact_category(b, b.cat.morphism_index("0<=1"))
    assert fact_connectivity(fc, b).failing_laws() == ["nonempty"]


def test_disconnected_factorizations_raise():
    """Test that two unrelated factorizations of one arrow are reported as components."""
    cat = FinCat.build(
        "split",
        ["T", "P1", "P2", "S"],
        [
            ("id_T", "T", "T"),
            ("id_P1", "P1", "P1"),
            ("id_P2", "P2", "P2"),
            ("id_S", "S", "S"),
            ("t1", "T", "P1"),
            ("t2", "T", "P2"),
            ("p1", "P1", "S"),
            ("p2", "P2", "S"),
            ("f", "T", "S"),
        ],
        [("p1", "t1", "f"), ("p2", "t2", "f")],
    )
    ids = frozenset(cat.identity(x) for x in cat.objects())
    smooth = ids | {cat.morphism_index("p1"), cat.morphism_index("p2")}
    closed = ids | {cat.morphism_index("t1"), cat.morphism_index("t2")}
    b = BaseCat(cat, smooth, closed)
    fc = fact_category(b, cat.morphism_index("f"))
    assert len(fc.objects) == 2
    with pytest.raises(Disconnected) as excinfo:
        fact_connectivity(fc, b)
    assert excinfo.value.components == [[0], [1]]


def test_missing_complement_raises(chain2):
    """Test that a closed morphism without a declared complement is an error."""
    b = BaseCat(chain2.cat, chain2.smooth, chain2.closed, chain2.initial, chain2.products, {})
    with pytest.raises(MissingComplement):
        check_hyp_core(b)


def test_missing_initial_object_is_a_violation(chain2):
    """Test that the core hypotheses need an initial object."""
    b = BaseCat(chain2.cat, chain2.smooth, chain2.closed, None, chain2.products)
    assert check_hyp_core(b).failing_laws() == ["initial"]


def test_products_without_choices_are_skipped(chain2):
    """Test that a base with no chosen products skips the product laws."""
    b = BaseCat(chain2.cat, chain2.smooth, chain2.closed, chain2.initial)
    report = check_products(b)
    assert report.passed
    assert report.skipped == ["no chosen products"]


def test_symmetry_on_a_chain_is_identity(chain3):
    """Test that the product symmetry of a meet-semilattice is trivial."""
    cat = chain3.cat
    for a in cat.objects():
        for c in cat.objects():
            assert cat.is_identity(tau(chain3, a, c))


def test_triangles_cover_every_composable_pair(chain2):
    """Test that with everything marked each composable pair gives a triangle."""
    cat = chain2.cat
    pairs = sum(1 for g in cat.morphisms() for f in cat.morphisms() if cat.composable(g, f))
    assert len(triangles(chain2)) == pairs


def test_product_of_morphisms_is_meet(powerset2):
    """Test that the product of two inclusions runs between the meets."""
    cat = powerset2.cat
    f = product_of_morphisms(powerset2, cat.morphism_index("1<=12"), cat.morphism_index("2<=12"))
    assert cat.morphism_name(f) == "∅<=12"


def test_derived_data_lives_on_the_base(chain2):
    """Test that pullbacks are memoised on their base and not shared between bases."""
    b = BaseCat(chain2.cat, chain2.smooth, chain2.closed, chain2.initial, chain2.products)
    assert b.memo == {}
    f = b.cat.morphism_index("0<=1")
    first = pullback(b, b.cat.identity(1), f)
    assert pullback(b, b.cat.identity(1), f) is first
    assert len(b.memo) == 1
    other = BaseCat(chain2.cat, chain2.smooth, chain2.closed, chain2.initial, chain2.products)
    assert other.memo == {}
    assert with_marking(b, b.smooth, b.closed).memo == {}


def _vee() -> BaseCat:
    cat = FinCat.thin("vee", ["a", "b", "c"], lambda x, y: x == y or y == "c")
    ids = frozenset(cat.identity(x) for x in cat.objects())
    return BaseCat(cat, ids | {cat.morphism_index("a<=c")}, ids | {cat.morphism_index("b<=c")})


def test_cospan_without_pullback_is_reported():
    """Test that a smooth/closed cospan with no cone is listed and flagged, not silently dropped."""
    b = _vee()
    cat = b.cat
    cospan = (cat.morphism_index("a<=c"), cat.morphism_index("b<=c"))
    assert missing_pullbacks(b) == [cospan]
    assert all((s.p, s.z) != cospan for s in cartesian_squares(b))
    report = CheckReport(suite="skeleton")
    check_pullbacks(b, report)
    assert report.failing_laws() == ["C-pullback"]
    assert report.violations[0].witness == ("a<=c", "b<=c")


def test_pullbacks_present_pass_the_pullback_law(powerset2):
    """Test that a base with every pullback records the law without violations."""
    report = CheckReport(suite="skeleton")
    check_pullbacks(powerset2, report)
    assert report.passed
    assert report.laws == ["C-pullback"]
