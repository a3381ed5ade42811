"""
Fibered category service: connection unfolding along paths, transition
isomorphisms along paths, and the axiom checks for fibered categories and
their morphisms in either variance.
"""
from typing import List, Mapping, Optional, Sequence, Tuple, TypeVar

from config import get_logger
from config.constants import Marked, Variance
from fibcat.exceptions import PastingTypeError
from fibcat.models.category import (
    Functor,
    IdentityFunctor,
    NatTrans,
    PastingStep,
    PastingTerm,
    compose_functors,
    same_functor,
)
from fibcat.models.fibered import FiberedCat, FibMorphism
from fibcat.models.memo import memoized
from fibcat.models.product import Tree
from fibcat.models.report import CheckReport
from fibcat.services.fincat import check_iso, compare_terms, evaluate_pasting

logger = get_logger(__name__)

Leg = Tuple[int, Mapping[int, NatTrans]]
T = TypeVar("T", FiberedCat, FibMorphism)


def split(h: FiberedCat, outer: int, inner: int) -> NatTrans:
    """The connection whose target is F(outer) ∘ F(inner)."""
    if h.variance == Variance.INVERSE:
        return h.conn_at(outer, inner)
    return h.conn_at(inner, outer)


def composite_of(h: FiberedCat, outer: int, inner: int) -> int:
    """The base morphism c with F(c) ≅ F(outer) ∘ F(inner)."""
    cat = h.base.cat
    if h.variance == Variance.INVERSE:
        return cat.compose(inner, outer)
    return cat.compose(outer, inner)


def composite(h: FiberedCat, path: Sequence[int]) -> int:
    """f_k ∘ ... ∘ f_1 for a path [f_1, ..., f_k]."""
    cat = h.base.cat
    result = path[0]
    for f in path[1:]:
        result = cat.compose(f, result)
    return result


def chain(h: FiberedCat, path: Sequence[int]) -> List[Functor]:
    """Functors along a path, outermost first."""
    functors = [h.functor(f) for f in path]
    if h.variance == Variance.DIRECT:
        functors.reverse()
    return functors


def left_comb(n: int) -> Tree:
    tree: Tree = 0
    for i in range(1, n):
        tree = (tree, i)
    return tree


def bracketings(leaves: Sequence[int]) -> List[Tree]:
    """Every binary bracketing of the given leaves, in a fixed order."""
    if len(leaves) == 1:
        return [leaves[0]]
    trees: List[Tree] = []
    for cut in range(1, len(leaves)):
        for left in bracketings(leaves[:cut]):
            for right in bracketings(leaves[cut:]):
                trees.append((left, right))
    return trees


def _unfold(h: FiberedCat, path: Sequence[int], tree: Tree) -> Tuple[PastingTerm, int, List[Functor]]:
    if isinstance(tree, int):
        functor = h.functor(path[tree])
        return PastingTerm.identity(functor), path[tree], [functor]
    left_term, a, left_chain = _unfold(h, path, tree[0])
    right_term, b, right_chain = _unfold(h, path, tree[1])
    cat = h.base.cat
    conn = h.conn_at(a, b)
    label = f"conn[{cat.morphism_name(a)},{cat.morphism_name(b)}]"
    head = PastingTerm(h.functor(cat.compose(b, a)), conn.target, (PastingStep(conn, label=label),))
    Fb = h.functor(b)
    if h.variance == Variance.INVERSE:
        term = head + left_term.whiskered(right=[Fb]) + right_term.whiskered(left=left_chain)
        return term, cat.compose(b, a), left_chain + right_chain
    term = head + left_term.whiskered(left=[Fb]) + right_term.whiskered(right=left_chain)
    return term, cat.compose(b, a), right_chain + left_chain


def unfold(h: FiberedCat, path: Sequence[int], tree: Optional[Tree] = None) -> PastingTerm:
    """
    Connection isomorphisms taking F(composite) to the chain of the path.

    Args:
        h: Fibered category
        path: Composable base morphisms [f_1, ..., f_k]
        tree: Bracketing of range(k); left-nested by default

    Returns:
        Term F(f_k ∘ ... ∘ f_1) ⇒ chain(path)
    """
    term, _, _ = _unfold(h, path, left_comb(len(path)) if tree is None else tree)
    return term


def fold(h: FiberedCat, path: Sequence[int], tree: Optional[Tree] = None) -> PastingTerm:
    """Inverse of unfold: chain(path) ⇒ F(composite)."""
    return unfold(h, path, tree).reversed()


@memoized
def unfolded(h: FiberedCat, path: Tuple[int, ...]) -> NatTrans:
    """unfold along a path, evaluated once per fibered category."""
    return evaluate_pasting(unfold(h, path))


@memoized
def folded(h: FiberedCat, path: Tuple[int, ...]) -> NatTrans:
    """fold along a path, evaluated once per fibered category."""
    return evaluate_pasting(fold(h, path))


def single(trans: NatTrans, label: str = "", inverted: bool = False) -> PastingTerm:
    """A one-step term."""
    step = PastingStep(trans, inverted=inverted, label=label or trans.name)
    return PastingTerm.chain([step])


def step(
    trans: NatTrans,
    left: Sequence[Functor] = (),
    right: Sequence[Functor] = (),
    label: str = "",
    inverted: bool = False,
) -> PastingTerm:
    """A one-step whiskered term."""
    return PastingTerm.chain(
        [PastingStep(trans, tuple(left), tuple(right), inverted, label or trans.name)]
    )


def path_theta(
    source: FiberedCat,
    target: FiberedCat,
    functors: Sequence[Functor],
    legs: Sequence[Leg],
    label: str = "theta",
) -> PastingTerm:
    """
    Transition isomorphism along a path assembled from per-leg families.

    Unfold the target connection, slide each leg's θ past R from the inside
    out, then fold the source connection.

    Returns:
        Term F2(c) ∘ R_in ⇒ R_out ∘ F1(c) for the composite c
    """
    path = [f for f, _ in legs]
    k = len(path)
    c = composite(source, path)
    in_obj, out_obj = source.ends(c)
    chain1 = chain(source, path)
    chain2 = chain(target, path)
    term = unfold(target, path).whiskered(right=[functors[in_obj]])
    cat = source.base.cat
    for pos in reversed(range(k)):
        seg = pos if source.variance == Variance.INVERSE else k - 1 - pos
        f, family = legs[seg]
        term = term + step(
            family[f], chain2[:pos], chain1[pos + 1 :], f"{label}[{cat.morphism_name(f)}]"
        )
    return term + fold(source, path).whiskered(left=[functors[out_obj]])


def check_fib_axioms(h: FiberedCat) -> CheckReport:
    """
    Check unitality and the cocycle condition of a fibered category.

    Laws: fib-0 (identities act as identity functors), conn-boundary,
    conn-unit (connections with an identity leg are identities), conn-iso
    and fib-1 (the cocycle over every composable triple).
    """
    cat = h.base.cat
    name = cat.morphism_name
    report = CheckReport(suite="fibered")
    for law in ("fib-0", "conn-boundary", "conn-unit", "conn-iso", "fib-1"):
        report.law(law)

    for f in h.morphisms():
        if cat.is_identity(f):
            S = cat.dom(f)
            if not same_functor(h.functor(f), IdentityFunctor(h.fiber(S))):
                report.add("fib-0", [h.name, name(f)])

    for f, g in h.composable_pairs():
        conn = h.conn_at(f, g)
        expected_target = compose_functors(*chain(h, [f, g]))
        if not (
            same_functor(conn.source, h.functor(cat.compose(g, f)))
            and same_functor(conn.target, expected_target)
        ):
            report.add("conn-boundary", [h.name, name(f), name(g)])
            continue
        if (cat.is_identity(f) or cat.is_identity(g)) and not conn.is_identity():
            report.add("conn-unit", [h.name, name(f), name(g)])
        check_iso(report, "conn-iso", conn, [h.name, name(f), name(g)])
    if not report.passed:
        report.skip("fib-1: connection data malformed")
        return report

    pairs = h.composable_pairs()
    for f, g in pairs:
        for k in h.morphisms():
            if cat.composable(k, g):
                path = [f, g, k]
                compare_terms(
                    report,
                    "fib-1",
                    unfold(h, path, ((0, 1), 2)),
                    unfold(h, path, (0, (1, 2))),
                    [h.name, name(f), name(g), name(k)],
                )
    logger.debug(f"{h.name}: {len(pairs)} composable pairs checked")
    return report


def check_coherence(h: FiberedCat) -> CheckReport:
    """All bracketings of every composable quadruple unfold to the same transformation."""
    cat = h.base.cat
    name = cat.morphism_name
    report = CheckReport(suite="coherence")
    report.law("coherence")
    trees = bracketings([0, 1, 2, 3])
    for f, g in h.composable_pairs():
        for k in h.morphisms():
            if not cat.composable(k, g):
                continue
            for l in h.morphisms():
                if not cat.composable(l, k):
                    continue
                path = [f, g, k, l]
                reference = unfold(h, path, trees[0])
                for tree in trees[1:]:
                    if not compare_terms(
                        report,
                        "coherence",
                        reference,
                        unfold(h, path, tree),
                        [h.name, *(name(x) for x in path), str(tree)],
                    ):
                        break
    return report


def _theta_scope(m: FibMorphism) -> List[int]:
    return sorted(f for f in m.theta if m.source.in_scope(f))


def check_mor_axioms(m: FibMorphism) -> CheckReport:
    """
    Check a morphism of fibered categories.

    Laws: mor-iso, mor (θ along a composite equals θ along the path) and
    mor-id (θ along an identity is the identity).
    """
    source, target = m.source, m.target
    cat = m.base.cat
    name = cat.morphism_name
    report = CheckReport(suite="morphism")
    for law in ("mor-iso", "mor", "mor-id"):
        report.law(law)

    scope = _theta_scope(m)
    for f in scope:
        check_iso(report, "mor-iso", m.theta_at(f), [m.name, name(f)])
    if not report.passed:
        report.skip("mor: transition data not invertible")
        return report

    members = set(scope)
    for f in scope:
        for g in scope:
            if not cat.composable(g, f) or cat.compose(g, f) not in members:
                continue
            gf = cat.compose(g, f)
            try:
                compare_terms(
                    report,
                    "mor",
                    single(m.theta_at(gf), f"theta[{name(gf)}]"),
                    path_theta(source, target, m.functors, [(f, m.theta), (g, m.theta)]),
                    [m.name, name(f), name(g)],
                )
            except PastingTypeError as exc:
                report.add("mor", [m.name, name(f), name(g)], f"ill-typed: {exc}")

    for f in scope:
        if cat.is_identity(f) and not m.theta_at(f).is_identity():
            report.add("mor-id", [m.name, name(f)])
    return report


def restrict(h: T, marked: Marked) -> T:
    """Restriction to a marked subcategory of the base."""
    if isinstance(h, FibMorphism):
        source = restrict(h.source, marked)
        target = restrict(h.target, marked)
        theta = {f: t for f, t in h.theta.items() if source.in_scope(f)}
        return FibMorphism(source, target, h.functors, theta, h.name)
    scope = h.scope & h.base.marked(marked)
    return FiberedCat(
        base=h.base,
        fibers=h.fibers,
        functors={f: F for f, F in h.functors.items() if f in scope},
        conn={(f, g): c for (f, g), c in h.conn.items() if f in scope and g in scope},
        variance=h.variance,
        scope=scope,
        name=h.name,
    )


def identity_morphism(h: FiberedCat, name: str = "id") -> FibMorphism:
    """The identity morphism of a fibered category."""
    functors = tuple(IdentityFunctor(h.fiber(S)) for S in h.base.cat.objects())
    name_of = h.base.cat.morphism_name
    theta = {f: NatTrans.identity(h.functor(f), f"theta[{name_of(f)}]") for f in h.morphisms()}
    return FibMorphism(h, h, functors, theta, name)

