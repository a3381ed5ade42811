"""
Base category service: hypothesis checks, pullbacks by cone enumeration,
factorization categories, chosen products and square enumeration.
"""
from itertools import product as cartesian
from typing import Callable, Dict, FrozenSet, List, Sequence, Tuple

import networkx as nx

from config import get_logger
from fibcat.exceptions import (
    Disconnected,
    MissingComplement,
    NoPullback,
    NotFound,
    NotUnique,
)
from fibcat.models.base import (
    BaseCat,
    FactArrow,
    FactCategory,
    FactObject,
    MixedSquare,
    ProductData,
    Pullback,
    Triangle,
)
from fibcat.models.category import FinCat
from fibcat.models.memo import memoized
from fibcat.models.report import CheckReport

logger = get_logger(__name__)

Cone = Tuple[int, int, int]


def _cones(b: BaseCat, p: int, f: int) -> List[Cone]:
    """All (apex, a, c) with p ∘ a = f ∘ c."""
    cat = b.cat
    P, T = cat.dom(p), cat.dom(f)
    cones = []
    for x in cat.objects():
        for a in cat.hom(x, P):
            pa = cat.compose(p, a)
            for c in cat.hom(x, T):
                if cat.compose(f, c) == pa:
                    cones.append((x, a, c))
    return cones


def _is_universal(b: BaseCat, cone: Cone, cones: Sequence[Cone]) -> bool:
    cat = b.cat
    x, a, c = cone
    for y, a2, c2 in cones:
        factors = [
            u
            for u in cat.hom(y, x)
            if cat.compose(a, u) == a2 and cat.compose(c, u) == c2
        ]
        if len(factors) != 1:
            return False
    return True


def is_pullback(b: BaseCat, p: int, f: int, apex: int, over_f: int, over_p: int) -> bool:
    """Whether (apex, over_f, over_p) is a limit cone over (p, f)."""
    cat = b.cat
    if cat.compose(p, over_f) != cat.compose(f, over_p):
        return False
    return _is_universal(b, (apex, over_f, over_p), _cones(b, p, f))


@memoized
def pullback(b: BaseCat, p: int, f: int) -> Pullback:
    """
    Pullback of p along f, verified universal against every cone.

    Along an identity the trivial square is returned. Otherwise the
    universal cone with the lowest apex id (then lowest leg ids) wins.

    Args:
        b: Base category
        p: P -> S
        f: T -> S

    Returns:
        Pullback whose over_f is the leg into P and over_p the leg into T

    Raises:
        NoPullback: If no cone is universal
    """
    cat = b.cat
    if cat.cod(p) != cat.cod(f):
        raise NoPullback(f"{cat.describe(p)} and {cat.describe(f)} do not share a codomain")
    if cat.is_identity(p):
        return Pullback(cat.dom(f), f, cat.identity(cat.dom(f)))
    if cat.is_identity(f):
        return Pullback(cat.dom(p), cat.identity(cat.dom(p)), p)
    cones = _cones(b, p, f)
    for cone in cones:
        if _is_universal(b, cone, cones):
            return Pullback(*cone)
    raise NoPullback(f"no pullback of {cat.describe(p)} along {cat.describe(f)}")


def is_cartesian(b: BaseCat, square: MixedSquare) -> bool:
    """Whether V is a pullback of P and Z over S."""
    return is_pullback(b, square.p, square.z, b.cat.dom(square.h), square.h, square.q)


def _is_subcategory(b: BaseCat, marked: FrozenSet[int], label: str, report: CheckReport) -> None:
    cat = b.cat
    for x in cat.objects():
        if cat.identity(x) not in marked:
            report.add("hyp-i", [label, cat.morphism_name(cat.identity(x))], "identity not marked")
    for f in cat.morphisms():
        if cat.is_iso(f) and f not in marked:
            report.add("hyp-i", [label, cat.morphism_name(f)], "isomorphism not marked")
    for g in marked:
        for f in marked:
            if cat.composable(g, f) and cat.compose(g, f) not in marked:
                report.add(
                    "hyp-i",
                    [label, cat.morphism_name(g), cat.morphism_name(f)],
                    "not closed under composition",
                )


def check_hyp_skel(b: BaseCat) -> CheckReport:
    """
    Check the factorization hypotheses (i)-(iv) on a base.

    (i) smooth and closed are subcategories containing all isomorphisms;
    (ii) pullbacks along smooth morphisms exist and stay smooth;
    (iii) closed is stable under smooth pullback and right-cancellative;
    (iv) every morphism factors as smooth after closed.
    """
    cat = b.cat
    report = CheckReport(suite="base")
    for law in ("hyp-i", "hyp-ii", "hyp-iii", "hyp-iv"):
        report.law(law)

    _is_subcategory(b, b.smooth, "smooth", report)
    _is_subcategory(b, b.closed, "closed", report)

    name = cat.morphism_name
    for p in sorted(b.smooth):
        for f in cat.morphisms():
            if cat.cod(f) != cat.cod(p):
                continue
            try:
                pb = pullback(b, p, f)
            except NoPullback:
                report.add("hyp-ii", [name(p), name(f)], "no pullback")
                continue
            if pb.over_p not in b.smooth:
                report.add("hyp-ii", [name(p), name(f)], f"base change {name(pb.over_p)} not smooth")
            if f in b.closed and pb.over_f not in b.closed:
                report.add("hyp-iii", [name(p), name(f)], f"base change {name(pb.over_f)} not closed")

    for g in cat.morphisms():
        for z in cat.morphisms():
            if cat.composable(g, z) and cat.compose(g, z) in b.closed and z not in b.closed:
                report.add("hyp-iii", [name(g), name(z)], "closed composite with non-closed factor")

    for f in cat.morphisms():
        if not _factorizations(b, f):
            report.add("hyp-iv", [name(f)], "no closed-then-smooth factorization")

    logger.debug(f"Skeleton hypotheses on {b.name}: {len(report.violations)} violations")
    return report


def check_hyp_core(b: BaseCat) -> CheckReport:
    """
    Check the initial object and the declared open complements.

    For closed z: Z -> S with complement u: U -> S, composing with u must
    biject Hom(T, U) onto the f: T -> S whose square with z over the
    initial object is Cartesian.

    Raises:
        MissingComplement: If a closed morphism has no declared complement
    """
    cat = b.cat
    report = CheckReport(suite="base")
    for law in ("initial", "complement-smooth", "complement"):
        report.law(law)
    name = cat.morphism_name

    if b.initial is None:
        report.add("initial", [], "no initial object declared")
        return report
    empty = b.initial
    for x in cat.objects():
        if len(cat.hom(empty, x)) != 1:
            report.add("initial", [cat.object_name(empty), cat.object_name(x)])
    if not report.passed:
        return report

    for z in sorted(b.closed):
        if z not in b.open_complements:
            raise MissingComplement(f"{b.name}: no open complement for {cat.describe(z)}")
        u = b.open_complements[z]
        S, Z, U = cat.cod(z), cat.dom(z), cat.dom(u)
        if u not in b.smooth or cat.cod(u) != S:
            report.add("complement-smooth", [name(z), name(u)])
            continue
        for T in cat.objects():
            through_u = [cat.compose(u, k) for k in cat.hom(T, U)]
            if len(set(through_u)) != len(through_u):
                report.add("complement", [name(z), cat.object_name(T)], "composition with u not injective")
            disjoint = [
                f
                for f in cat.hom(T, S)
                if is_pullback(b, f, z, empty, cat.hom(empty, T)[0], cat.hom(empty, Z)[0])
            ]
            if sorted(set(through_u)) != sorted(disjoint):
                report.add(
                    "complement",
                    [name(z), cat.object_name(T)],
                    f"through u: {sorted(name(f) for f in set(through_u))}, "
                    f"disjoint from Z: {sorted(name(f) for f in disjoint)}",
                )
    return report


def _factorizations(b: BaseCat, f: int) -> List[FactObject]:
    cat = b.cat
    T, S = cat.dom(f), cat.cod(f)
    found = []
    for P in cat.objects():
        for t in cat.hom(T, P):
            if t not in b.closed:
                continue
            for p in cat.hom(P, S):
                if p in b.smooth and cat.compose(p, t) == f:
                    found.append(FactObject(P, t, p))
    return found


@memoized
def fact_category(b: BaseCat, f: int) -> FactCategory:
    """All factorizations of f, ordered by (mid, closed part, smooth part), and the arrows between them."""
    cat = b.cat
    objects = tuple(sorted(_factorizations(b, f), key=lambda o: (o.mid, o.closed_part, o.smooth_part)))
    arrows = []
    for i, src in enumerate(objects):
        for j, tgt in enumerate(objects):
            for q in cat.hom(src.mid, tgt.mid):
                if (
                    q in b.smooth
                    and cat.compose(q, src.closed_part) == tgt.closed_part
                    and cat.compose(tgt.smooth_part, q) == src.smooth_part
                ):
                    arrows.append(FactArrow(i, j, q))
    return FactCategory(f, objects, tuple(arrows))


def domination_witness(
    fc: FactCategory, b: BaseCat, i: int, j: int
) -> Tuple[FactObject, int, int]:
    """
    A factorization dominating objects i and j, built from their pullback.

    Returns:
        (dominating object, arrow to i, arrow to j)

    Raises:
        NoPullback: If the smooth parts have no pullback
        NotFound: If the induced closed part does not exist
    """
    cat = b.cat
    first, second = fc.objects[i], fc.objects[j]
    pb = pullback(b, first.smooth_part, second.smooth_part)
    induced = [
        t
        for t in cat.hom(cat.dom(fc.ambient), pb.apex)
        if cat.compose(pb.over_f, t) == first.closed_part
        and cat.compose(pb.over_p, t) == second.closed_part
    ]
    if len(induced) != 1:
        raise NotFound(f"no unique induced closed part for factorizations {i} and {j}")
    smooth = cat.compose(first.smooth_part, pb.over_f)
    return FactObject(pb.apex, induced[0], smooth), pb.over_f, pb.over_p


def fact_connectivity(fc: FactCategory, b: BaseCat) -> CheckReport:
    """
    Check that a factorization category is non-empty and connected, and that
    every pair of factorizations is dominated by a third.

    Raises:
        Disconnected: With the connected components when the graph splits
    """
    cat = b.cat
    report = CheckReport(suite="base")
    for law in ("nonempty", "connected", "domination"):
        report.law(law)
    ambient = cat.morphism_name(fc.ambient)
    if not fc.objects:
        report.add("nonempty", [ambient])
        return report

    graph = nx.Graph()
    graph.add_nodes_from(range(len(fc.objects)))
    graph.add_edges_from((a.source, a.target) for a in fc.arrows)
    if not nx.is_connected(graph):
        components = sorted(sorted(c) for c in nx.connected_components(graph))
        raise Disconnected(f"Fact({ambient}) has {len(components)} components", components)

    arrows = {(a.source, a.target, a.q) for a in fc.arrows}
    witnesses = 0
    for i in range(len(fc.objects)):
        for j in range(i + 1, len(fc.objects)):
            try:
                obj, to_i, to_j = domination_witness(fc, b, i, j)
            except (NoPullback, NotFound) as exc:
                report.add("domination", [ambient, str(i), str(j)], str(exc))
                continue
            k = fc.index(obj)
            if k is None or (k, i, to_i) not in arrows or (k, j, to_j) not in arrows:
                report.add(
                    "domination",
                    [ambient, str(i), str(j)],
                    f"pullback factorization through {cat.object_name(obj.mid)} is not in Fact",
                )
            else:
                witnesses += 1
    report.note(f"Fact({ambient}): {len(fc.objects)} objects, {witnesses} domination witnesses")
    return report


@memoized
def product_of_morphisms(b: BaseCat, f1: int, f2: int) -> int:
    """
    The morphism f1 × f2 between chosen products.

    Raises:
        NotFound: If no morphism commutes with both projections
        NotUnique: If more than one does
    """
    cat = b.cat
    source = b.product(cat.dom(f1), cat.dom(f2))
    target = b.product(cat.cod(f1), cat.cod(f2))
    return _induced(
        b,
        source,
        target.obj,
        lambda u: cat.compose(target.first, u) == cat.compose(f1, source.first)
        and cat.compose(target.second, u) == cat.compose(f2, source.second),
        f"{cat.morphism_name(f1)} x {cat.morphism_name(f2)}",
    )


@memoized
def tau(b: BaseCat, a: int, c: int) -> int:
    """The symmetry a × c -> c × a of chosen products."""
    cat = b.cat
    source = b.product(a, c)
    target = b.product(c, a)
    return _induced(
        b,
        source,
        target.obj,
        lambda u: cat.compose(target.first, u) == source.second
        and cat.compose(target.second, u) == source.first,
        f"tau({cat.object_name(a)}, {cat.object_name(c)})",
    )


def _induced(
    b: BaseCat, source: ProductData, target: int, ok: Callable[[int], bool], label: str
) -> int:
    found = [u for u in b.cat.hom(source.obj, target) if ok(u)]
    if not found:
        raise NotFound(f"{b.name}: no morphism {label}")
    if len(found) > 1:
        raise NotUnique(f"{b.name}: {len(found)} candidates for {label}")
    return found[0]


def check_products(b: BaseCat) -> CheckReport:
    """Universal property, functoriality and strict associativity of the chosen products."""
    cat = b.cat
    report = CheckReport(suite="base")
    for law in ("product-universal", "product-functorial", "product-associative"):
        report.law(law)
    if not b.has_products:
        report.skip("no chosen products")
        return report
    name = cat.object_name

    for (x, y), pd in sorted(b.products.items()):
        if cat.dom(pd.first) != pd.obj or cat.cod(pd.first) != x or cat.dom(pd.second) != pd.obj or cat.cod(pd.second) != y:
            report.add("product-universal", [name(x), name(y)], "projections mistyped")
            continue
        for w in cat.objects():
            for f1, f2 in cartesian(cat.hom(w, x), cat.hom(w, y)):
                factors = [
                    u
                    for u in cat.hom(w, pd.obj)
                    if cat.compose(pd.first, u) == f1 and cat.compose(pd.second, u) == f2
                ]
                if len(factors) != 1:
                    report.add(
                        "product-universal",
                        [name(x), name(y), cat.morphism_name(f1), cat.morphism_name(f2)],
                        f"{len(factors)} factorizations",
                    )
    if not report.passed:
        return report

    for x, y in cartesian(cat.objects(), cat.objects()):
        if (x, y) not in b.products:
            report.add("product-universal", [name(x), name(y)], "no chosen product")
    if not report.passed:
        return report

    mname = cat.morphism_name
    composable = [(g, f) for g in cat.morphisms() for f in cat.morphisms() if cat.composable(g, f)]
    for (g1, f1), (g2, f2) in cartesian(composable, composable):
        lhs = cat.compose(product_of_morphisms(b, g1, g2), product_of_morphisms(b, f1, f2))
        rhs = product_of_morphisms(b, cat.compose(g1, f1), cat.compose(g2, f2))
        if lhs != rhs:
            report.add("product-functorial", [mname(g1), mname(f1), mname(g2), mname(f2)])

    for x, y, z in cartesian(cat.objects(), repeat=3):
        if b.product_object(x, y, z) != b.product(x, b.product(y, z).obj).obj:
            report.add("product-associative", [name(x), name(y), name(z)])
    if report.verdict("product-associative"):
        for f1, f2, f3 in cartesian(cat.morphisms(), repeat=3):
            lhs = product_of_morphisms(b, product_of_morphisms(b, f1, f2), f3)
            rhs = product_of_morphisms(b, f1, product_of_morphisms(b, f2, f3))
            if lhs != rhs:
                report.add("product-associative", [mname(f1), mname(f2), mname(f3)])
    return report


def mixed_squares(b: BaseCat) -> List[MixedSquare]:
    """Every commutative square p ∘ h = z ∘ q with h, z closed and q, p smooth."""
    cat = b.cat
    squares = []
    for p in sorted(b.smooth):
        for z in sorted(b.closed):
            if cat.cod(p) != cat.cod(z):
                continue
            for h in sorted(b.closed):
                if cat.cod(h) != cat.dom(p):
                    continue
                ph = cat.compose(p, h)
                for q in cat.hom(cat.dom(h), cat.dom(z)):
                    if q in b.smooth and cat.compose(z, q) == ph:
                        squares.append(MixedSquare(q, h, z, p))
    return sorted(squares)


def _smooth_closed_cospans(b: BaseCat) -> List[Tuple[int, int]]:
    cat = b.cat
    return [(p, z) for p in sorted(b.smooth) for z in sorted(b.closed) if cat.cod(p) == cat.cod(z)]


def cartesian_squares(b: BaseCat) -> List[MixedSquare]:
    """
    The chosen pullback square for every smooth p and closed z over a common codomain.

    Only the square returned by pullback() is listed, so the C and C' checks
    see one Cartesian square per cospan, not every isomorphic copy of it.
    Cospans with no pullback are skipped here; missing_pullbacks() lists them
    and the C checks report them.
    """
    squares = []
    for p, z in _smooth_closed_cospans(b):
        try:
            pb = pullback(b, p, z)
        except NoPullback:
            logger.warning(f"{b.name}: skipping cospan ({b.cat.describe(p)}, {b.cat.describe(z)})")
            continue
        if pb.over_f in b.closed and pb.over_p in b.smooth:
            squares.append(MixedSquare(pb.over_p, pb.over_f, z, p))
    return sorted(squares)


def missing_pullbacks(b: BaseCat) -> List[Tuple[int, int]]:
    """Smooth/closed cospans (p, z) over a common codomain that have no pullback."""
    missing = []
    for p, z in _smooth_closed_cospans(b):
        try:
            pullback(b, p, z)
        except NoPullback:
            missing.append((p, z))
    return missing


def check_pullbacks(b: BaseCat, report: CheckReport, law: str = "C-pullback") -> None:
    """Record each smooth/closed cospan without a pullback as a violation of law."""
    report.law(law)
    name = b.cat.morphism_name
    for p, z in missing_pullbacks(b):
        report.add(law, [name(p), name(z)], "no pullback; the C check cannot see this cospan")


def triangles(b: BaseCat) -> List[Triangle]:
    """Every q = p ∘ h with h closed and p, q smooth."""
    cat = b.cat
    found = []
    for p in sorted(b.smooth):
        for h in sorted(b.closed):
            if cat.composable(p, h):
                q = cat.compose(p, h)
                if q in b.smooth:
                    found.append(Triangle(h, p, q))
    return sorted(found)


def _meet_products(cat: FinCat, meet: Callable[[str, str], str]) -> Dict[Tuple[int, int], ProductData]:
    products = {}
    for x, y in cartesian(cat.objects(), cat.objects()):
        a, c = cat.object_name(x), cat.object_name(y)
        m = meet(a, c)
        obj = cat.object_index(m)
        products[(x, y)] = ProductData(
            obj,
            cat.morphism_index(f"{m}<={a}"),
            cat.morphism_index(f"{m}<={c}"),
        )
    return products


def _pseudo_complements(cat: FinCat, products: Dict[Tuple[int, int], ProductData], bottom: int) -> Dict[int, int]:
    """For each Z <= S the largest U <= S with U ∧ Z = bottom."""
    complements = {}
    for z in cat.morphisms():
        Z, S = cat.dom(z), cat.cod(z)
        candidates = [U for U in cat.objects() if cat.hom(U, S) and products[(U, Z)].obj == bottom]
        largest = [U for U in candidates if all(cat.hom(V, U) for V in candidates)]
        if largest:
            complements[z] = cat.hom(largest[0], S)[0]
    return complements


def chain_base(n: int) -> BaseCat:
    """The chain 0 <= 1 <= ... <= n-1, everything marked, min as product."""
    elements = [str(i) for i in range(n)]
    cat = FinCat.thin(f"chain{n}", elements, lambda a, c: int(a) <= int(c))
    products = _meet_products(cat, lambda a, c: min(a, c, key=int))
    everything = frozenset(cat.morphisms())
    return BaseCat(
        cat,
        everything,
        everything,
        initial=0,
        products=products,
        open_complements=_pseudo_complements(cat, products, 0),
    )


def _subset_name(subset: Sequence[int]) -> str:
    return "".join(str(i) for i in subset) or "∅"


def powerset_base(n: int) -> BaseCat:
    """Subsets of {1..n} under inclusion, everything marked, intersection as product."""
    subsets = [
        [i + 1 for i in range(n) if mask >> i & 1] for mask in range(2**n)
    ]
    subsets.sort(key=lambda s: (len(s), s))
    elements = [_subset_name(s) for s in subsets]
    points = {_subset_name(s): set(s) for s in subsets}
    cat = FinCat.thin(f"powerset{n}", elements, lambda a, c: points[a] <= points[c])

    def meet(a: str, c: str) -> str:
        return _subset_name(sorted(points[a] & points[c]))

    products = _meet_products(cat, meet)
    everything = frozenset(cat.morphisms())
    return BaseCat(
        cat,
        everything,
        everything,
        initial=0,
        products=products,
        open_complements=_pseudo_complements(cat, products, 0),
    )


def with_marking(b: BaseCat, smooth: FrozenSet[int], closed: FrozenSet[int]) -> BaseCat:
    """Same base with different marked subcategories; complements are kept for closed morphisms only."""
    return BaseCat(
        b.cat,
        frozenset(smooth),
        frozenset(closed),
        b.initial,
        b.products,
        {z: u for z, u in b.open_complements.items() if z in closed},
    )

