"""
External tensor structures: the monoidality condition, tensor skeleta and
cores with their extension, transposition of m along adjoints, the
associativity and commutativity constraints, and ρ over morphisms.
"""
from functools import partial
from itertools import product as cartesian
from typing import Callable, Dict, Hashable, List, Mapping, Optional, Sequence, Tuple, TypeVar, Union, cast

from config import get_logger
from config.constants import Side, Variance
from fibcat.exceptions import (
    CompositionFailure,
    ExtensionFailure,
    FibcatError,
    IndependenceFailure,
    MissingData,
    NotInvertible,
    NotIso,
    PastingTypeError,
    SquareNotCommuting,
)
from fibcat.models.adjoint import AdjointAssignment, Transpose
from fibcat.models.base import MixedSquare
from fibcat.models.category import (
    Functor,
    IdentityFunctor,
    NatTrans,
    PastingTerm,
    compose_functors,
    same_functor,
)
from fibcat.models.ets import (
    AssocConstraint,
    CommConstraint,
    ETCoreData,
    ETSData,
    ETSkeletonData,
    MorETCoreData,
    MorETS,
    MorETSkeletonData,
    Pair,
)
from fibcat.models.fibered import FiberedCat
from fibcat.models.product import (
    PairFunctor,
    RebracketFunctor,
    pair_trans,
    product,
    reassociate,
    swap,
)
from fibcat.models.report import CheckReport
from fibcat.services.adjoint import (
    beck_chevalley_right,
    derive_opposite_conn,
    transpose_theta,
)
from fibcat.services.base import (
    cartesian_squares,
    check_pullbacks,
    fact_category,
    mixed_squares,
    product_of_morphisms,
    tau,
    triangles,
)
from fibcat.services.fibered import chain, composite, composite_of, folded, single, split, step, unfolded
from fibcat.services.fincat import check_iso, compare_terms, compare_trans, evaluate_pasting

logger = get_logger(__name__)

PairLeg = Tuple[int, int, Mapping[Pair, NatTrans]]
# A single stored m, or the legs of a path assembled by path_m
PathSpec = Union[NatTrans, Sequence[PairLeg]]
T = TypeVar("T")


def _x(h: FiberedCat, a: int, b: int) -> int:
    return h.base.product(a, b).obj


def _pair_name(h: FiberedCat, f1: int, f2: int) -> str:
    name = h.base.cat.morphism_name
    return f"{name(f1)},{name(f2)}"


def _identity(functor: Functor) -> NatTrans:
    return NatTrans.identity(functor)


def _family_ids(family: Mapping[Pair, NatTrans]) -> Tuple[Tuple[Pair, int], ...]:
    return tuple(sorted((key, id(t)) for key, t in family.items()))


def _cached(h: FiberedCat, key: Hashable, pins: Tuple[object, ...], compute: Callable[[], T]) -> T:
    """
    compute() memoised in h.memo.

    Keys may hold ids of the pinned objects: the entry keeps them alive, so an
    id cannot be reused while its entry exists.
    """
    if key not in h.memo:
        h.memo[key] = (compute(), pins)
    return cast(T, h.memo[key][0])


def path_m(e: ETSData, legs: Sequence[PairLeg], label: str = "m") -> PastingTerm:
    """
    Monoidality isomorphism along a pair of paths assembled from per-leg families.

    Unfold both connections, slide each leg's m past the box from the
    outside in, then fold the connection of the product path.

    Returns:
        Term B_out ∘ (F(c1) x F(c2)) ⇒ F(c1 x c2) ∘ B_in for the composites c1, c2
    """
    h = e.host
    b = h.base
    path1 = [f1 for f1, _, _ in legs]
    path2 = [f2 for _, f2, _ in legs]
    k = len(legs)
    in1, out1 = h.ends(composite(h, path1))
    in2, out2 = h.ends(composite(h, path2))
    prod_path = [product_of_morphisms(b, f1, f2) for f1, f2 in zip(path1, path2)]
    pairs = [PairFunctor(F1, F2) for F1, F2 in zip(chain(h, path1), chain(h, path2))]
    prods = chain(h, prod_path)
    unfold_pair = pair_trans(unfolded(h, tuple(path1)), unfolded(h, tuple(path2)))
    term = step(unfold_pair, left=[e.box_at(out1, out2)], label="unfold")
    for pos in range(k):
        seg = pos if h.variance == Variance.INVERSE else k - 1 - pos
        f1, f2, family = legs[seg]
        term = term + step(
            family[(f1, f2)], prods[:pos], pairs[pos + 1 :], f"{label}[{_pair_name(h, f1, f2)}]"
        )
    return term + step(folded(h, tuple(prod_path)), right=[e.box_at(in1, in2)], label="fold")


def path_m_value(e: ETSData, legs: Sequence[PairLeg]) -> NatTrans:
    """path_m evaluated, memoised on the host by box and by the m of each leg."""
    picked = tuple(family[(f1, f2)] for f1, f2, family in legs)
    key = ("path_m", id(e.box), tuple((f1, f2, id(t)) for (f1, f2, _), t in zip(legs, picked)))
    return _cached(e.host, key, (e.box, picked), lambda: evaluate_pasting(path_m(e, legs)))


def _path_value(e: ETSData, path: PathSpec) -> NatTrans:
    return path if isinstance(path, NatTrans) else path_m_value(e, path)


def _path_term(e: ETSData, path: PathSpec) -> PastingTerm:
    return single(path, path.name) if isinstance(path, NatTrans) else path_m(e, path)


def _compare_paths(
    report: CheckReport, law: str, e: ETSData, first: PathSpec, second: PathSpec, witness: List[str]
) -> None:
    """Compare two m paths by value; the pasting terms are only built for a mismatch trace."""
    report.law(law)
    try:
        lhs, rhs = _path_value(e, first), _path_value(e, second)
    except (PastingTypeError, MissingData, KeyError) as exc:
        report.add(law, witness, f"ill-typed: {exc}")
        return
    except NotIso as exc:
        report.add(law, witness, f"not invertible: {exc}")
        return
    compare_trans(
        report, law, lhs, rhs, witness, terms=lambda: (_path_term(e, first), _path_term(e, second))
    )


def m_boundary(e: ETSData, f1: int, f2: int) -> Tuple[Functor, Functor]:
    """(B_out ∘ (F(f1) x F(f2)), F(f1 x f2) ∘ B_in), the boundary of m at (f1, f2)."""
    h = e.host
    (in1, out1), (in2, out2) = h.ends(f1), h.ends(f2)
    f12 = product_of_morphisms(h.base, f1, f2)
    source = compose_functors(e.box_at(out1, out2), PairFunctor(h.functor(f1), h.functor(f2)))
    target = compose_functors(h.functor(f12), e.box_at(in1, in2))
    return source, target


def _check_m_family(e: ETSData, report: CheckReport, boundary_law: str) -> None:
    report.law(boundary_law)
    report.law("m-iso")
    for f1, f2 in e.pairs():
        m = e.m[(f1, f2)]
        witness = [e.name, _pair_name(e.host, f1, f2)]
        try:
            source, target = m_boundary(e, f1, f2)
        except FibcatError as exc:
            report.add(boundary_law, witness, str(exc))
            continue
        if not (same_functor(m.source, source) and same_functor(m.target, target)):
            report.add(boundary_law, witness)
            continue
        check_iso(report, "m-iso", m, witness)


def check_mets(e: ETSData, boundary_law: str = "m-boundary") -> CheckReport:
    """
    Check the monoidality condition: m along (g1 f1, g2 f2) equals m along
    f then m along g, for every pair of composable pairs carrying m.
    """
    h = e.host
    cat = h.base.cat
    report = CheckReport(suite="ets")
    _check_m_family(e, report, boundary_law)
    report.law("mETS")
    if not report.passed:
        report.skip(f"mETS: {e.name} data malformed")
        return report
    keys = e.pairs()
    members = set(keys)
    for f1, f2 in keys:
        for g1, g2 in keys:
            if not (cat.composable(g1, f1) and cat.composable(g2, f2)):
                continue
            gf = (cat.compose(g1, f1), cat.compose(g2, f2))
            if gf not in members:
                continue
            witness = [e.name, _pair_name(h, f1, f2), _pair_name(h, g1, g2)]
            _compare_paths(report, "mETS", e, e.m[gf], [(f1, f2, e.m), (g1, g2, e.m)], witness)
    logger.debug(f"mETS on {e.name}: {len(keys)} pairs")
    return report


def restrict_ets(e: ETSData) -> ETSkeletonData:
    """m restricted to pairs of smooth and to pairs of closed morphisms."""
    b = e.host.base
    return ETSkeletonData(
        e.host,
        e.box,
        {k: m for k, m in e.m.items() if k[0] in b.smooth and k[1] in b.smooth},
        {k: m for k, m in e.m.items() if k[0] in b.closed and k[1] in b.closed},
        e.name,
    )


def _square_pair_witness(e: ETSData, sq1: MixedSquare, sq2: MixedSquare) -> List[str]:
    name = e.host.base.cat.morphism_name
    return [
        "|".join(name(x) for x in (sq.q, sq.h, sq.z, sq.p)) for sq in (sq1, sq2)
    ]


def _check_square_pairs(
    s: ETSkeletonData, squares: Sequence[MixedSquare], law: str, report: CheckReport
) -> None:
    e = s.smooth_part()
    report.law(law)
    for sq1, sq2 in cartesian(squares, squares):
        _compare_paths(
            report,
            law,
            e,
            [(sq1.h, sq2.h, s.m_cl), (sq1.p, sq2.p, s.m_sm)],
            [(sq1.q, sq2.q, s.m_sm), (sq1.z, sq2.z, s.m_cl)],
            _square_pair_witness(e, sq1, sq2),
        )


def _check_triangle_pairs(s: ETSkeletonData, report: CheckReport) -> None:
    e = s.smooth_part()
    h = s.host
    name = h.base.cat.morphism_name
    found = triangles(h.base)
    report.law("T-ETS-1")
    for t1, t2 in cartesian(found, found):
        witness = [f"{name(t.h)}|{name(t.p)}|{name(t.q)}" for t in (t1, t2)]
        try:
            direct = s.m_sm[(t1.q, t2.q)]
        except KeyError as exc:
            report.add("T-ETS-1", witness, f"ill-typed: no m_sm at ({_pair_name(h, t1.q, t2.q)}) {exc}")
            continue
        _compare_paths(
            report, "T-ETS-1", e, direct, [(t1.h, t2.h, s.m_cl), (t1.p, t2.p, s.m_sm)], witness
        )


def _check_ets_parts(s: ETSkeletonData, report: CheckReport) -> None:
    report.merge(check_mets(s.smooth_part(), boundary_law="ex-ETS-0"), "sm")
    report.merge(check_mets(s.closed_part(), boundary_law="ex-ETS-0"), "cl")


def check_ets_skeleton(s: ETSkeletonData) -> CheckReport:
    """
    Check a tensor skeleton: per-subcategory monoidality on a shared box,
    m^sm = m^cl on doubly marked pairs, and the exchange condition over
    every pair of mixed squares.
    """
    b = s.host.base
    report = CheckReport(suite="ets-skeleton")
    _check_ets_parts(s, report)
    if not report.passed:
        report.skip("ex-ETS-1: subcategory structures fail their axioms")
        return report
    report.law("coincide")
    for key in sorted(set(s.m_sm) & set(s.m_cl)):
        if s.m_sm[key] != s.m_cl[key]:
            report.add("coincide", [_pair_name(s.host, *key)])
    squares = mixed_squares(b)
    _check_square_pairs(s, squares, "ex-ETS-1", report)
    logger.debug(f"Tensor skeleton {s.name}: {len(squares) ** 2} square pairs")
    return report


def check_ets_CT(s: ETSkeletonData) -> CheckReport:
    """The tensor exchange condition on pairs of Cartesian squares (C) and pairs of triangles (T)."""
    report = CheckReport(suite="ets-skeleton-ct")
    _check_ets_parts(s, report)
    if not report.passed:
        report.skip("C-ETS-1, T-ETS-1: subcategory structures fail their axioms")
        return report
    check_pullbacks(s.host.base, report)
    _check_square_pairs(s, cartesian_squares(s.host.base), "C-ETS-1", report)
    _check_triangle_pairs(s, report)
    return report


def extend_ets_skeleton(s: ETSkeletonData) -> ETSData:
    """
    Extend a tensor skeleton to m on every pair of base morphisms.

    m_{f1,f2} is m^cl_{t1,t2} followed by m^sm_{p1,p2} for factorizations
    f_i = p_i ∘ t_i; every pair of factorizations must give the same value.
    A successful extension is memoised on the host, so repeated calls on the
    same families return the same structure.

    Raises:
        IndependenceFailure: Two pairs of factorizations disagree
        CompositionFailure: The assembled m fails the monoidality condition
    """
    key = ("extend", s.name, id(s.box), _family_ids(s.m_sm), _family_ids(s.m_cl))
    pins = (s.box, tuple(s.m_sm.values()), tuple(s.m_cl.values()))
    return _cached(s.host, key, pins, partial(_extend_ets_skeleton, s))


def _extend_ets_skeleton(s: ETSkeletonData) -> ETSData:
    h = s.host
    cat = h.base.cat
    e = s.smooth_part()
    report = CheckReport(suite="extend")
    report.law("independence")
    m: Dict[Pair, NatTrans] = {}
    for f1, f2 in cartesian(h.morphisms(), h.morphisms()):
        fc1, fc2 = fact_category(h.base, f1), fact_category(h.base, f2)
        if not fc1.objects or not fc2.objects:
            raise ExtensionFailure(f"({_pair_name(h, f1, f2)}) has no factorization", report)
        first: Optional[NatTrans] = None
        first_label = ""
        for o1, o2 in cartesian(fc1.objects, fc2.objects):
            legs = [
                (o1.closed_part, o2.closed_part, s.m_cl),
                (o1.smooth_part, o2.smooth_part, s.m_sm),
            ]
            value = path_m_value(e, legs)
            label = (
                f"{cat.morphism_name(o1.smooth_part)}∘{cat.morphism_name(o1.closed_part)}|"
                f"{cat.morphism_name(o2.smooth_part)}∘{cat.morphism_name(o2.closed_part)}"
            )
            if first is None:
                first, first_label = value, label
            elif value.components != first.components:
                report.add("independence", [_pair_name(h, f1, f2), first_label, label])
                raise IndependenceFailure(
                    f"m along ({_pair_name(h, f1, f2)}) depends on the factorization", report
                )
        assert first is not None
        m[(f1, f2)] = first.named(f"m[{_pair_name(h, f1, f2)}]")
    extended = ETSData(h, s.box, m, s.name)
    axioms = check_mets(extended)
    if not axioms.passed:
        raise CompositionFailure(f"extension of {s.name} fails the monoidality condition", axioms)
    logger.info(f"Extended tensor skeleton {s.name} to {len(m)} pairs")
    return extended


def _retyped(t: NatTrans, source: Functor, target: Functor, name: str) -> NatTrans:
    return NatTrans(source, target, t.components, name)


def _transpose_term(e: ETSData, assign: AdjointAssignment, f1: int, f2: int) -> PastingTerm:
    h = e.host
    f12 = product_of_morphisms(h.base, f1, f2)
    (in1, out1), (in2, out2) = h.ends(f1), h.ends(f2)
    B_S, B_T = e.box_at(in1, in2), e.box_at(out1, out2)
    m = e.m_at(f1, f2)
    a12 = assign.adjoint(f12)
    adj = PairFunctor(assign.adjoint(f1), assign.adjoint(f2))
    if assign.side == Side.RIGHT:
        # B_S (f1_* x f2_*) ⇒ (f1 x f2)_* B_T
        return (
            step(assign.unit(f12), right=[B_S, adj], label="eta")
            + step(m, left=[a12], right=[adj], inverted=True, label="m")
            + step(pair_trans(assign.counit(f1), assign.counit(f2)), left=[a12, B_T], label="eps")
        )
    # (f1 x f2)_# B_T ⇒ B_S (f1_# x f2_#), inverted afterwards
    return (
        step(pair_trans(assign.unit(f1), assign.unit(f2)), left=[a12, B_T], label="eta")
        + step(m, left=[a12], right=[adj], label="m")
        + step(assign.counit(f12), right=[B_S, adj], label="eps")
    )


def transposable_pairs(e: ETSData, assign: AdjointAssignment) -> List[Pair]:
    """Pairs of marked morphisms whose product is marked too."""
    marked = set(assign.morphisms())
    b = e.host.base
    return [
        (f1, f2)
        for f1, f2 in e.pairs()
        if f1 in marked and f2 in marked and product_of_morphisms(b, f1, f2) in marked
    ]


def transpose_m(e: ETSData, assign: AdjointAssignment) -> Transpose:
    """
    Transpose m along the adjoints of marked morphisms.

    For right adjoints m-bar = (ε x ε) ∘ m^-1 ∘ η and must be invertible;
    for left adjoints the composite (ε) ∘ m ∘ (η x η) runs the other way
    and m-bar is its inverse. The result is memoised on the host and must
    not be modified.
    """
    key = ("transpose_m", id(e.box), _family_ids(e.m), id(assign))
    pins = (e.box, tuple(e.m.values()), assign)
    return _cached(e.host, key, pins, partial(_transpose_m, e, assign))


def _transpose_m(e: ETSData, assign: AdjointAssignment) -> Transpose:
    h = e.host
    b = h.base
    result = Transpose(assign.side)
    for f1, f2 in transposable_pairs(e, assign):
        key = (f1, f2)
        try:
            candidate = evaluate_pasting(_transpose_term(e, assign, f1, f2))
        except NotIso as exc:
            result.verdicts[key] = False
            result.witnesses[key] = str(exc)
            continue
        ok = candidate.is_iso()
        result.verdicts[key] = ok
        if not ok:
            bad = next(x for x, c in enumerate(candidate.components) if not candidate.codomain.is_iso(c))
            result.witnesses[key] = candidate.domain.object_name(bad)
            continue
        (in1, out1), (in2, out2) = h.ends(f1), h.ends(f2)
        adj = PairFunctor(assign.adjoint(f1), assign.adjoint(f2))
        source = compose_functors(e.box_at(in1, in2), adj)
        target = compose_functors(assign.adjoint(product_of_morphisms(b, f1, f2)), e.box_at(out1, out2))
        bar = candidate if assign.side == Side.RIGHT else candidate.inverse()
        result.family[key] = _retyped(bar, source, target, f"m-bar[{_pair_name(h, f1, f2)}]")
    logger.debug(f"Transposed {len(result.family)} monoidality isomorphisms of {e.name}")
    return result


def transpose_back_m(
    e: ETSData, family: Mapping[Pair, NatTrans], assign: AdjointAssignment
) -> Dict[Pair, NatTrans]:
    """
    Recover m from m-bar with the reverse unit/counit composite.

    Args:
        e: Structure supplying the host and box (its m is ignored)
        family: m-bar per pair of marked morphisms
        assign: Adjoints of the marked morphisms

    Raises:
        NotInvertible: If a recovered component has no inverse
    """
    h = e.host
    b = h.base
    recovered: Dict[Pair, NatTrans] = {}
    for (f1, f2), bar in sorted(family.items()):
        f12 = product_of_morphisms(b, f1, f2)
        (in1, out1), (in2, out2) = h.ends(f1), h.ends(f2)
        B_S, B_T = e.box_at(in1, in2), e.box_at(out1, out2)
        s12 = h.functor(f12)
        inv = PairFunctor(h.functor(f1), h.functor(f2))
        name = _pair_name(h, f1, f2)
        try:
            if assign.side == Side.RIGHT:
                # f12^* B_S ⇒ B_T (f1^* x f2^*), then inverted
                beta = evaluate_pasting(
                    step(pair_trans(assign.unit(f1), assign.unit(f2)), left=[s12, B_S], label="eta")
                    + step(bar, left=[s12], right=[inv], label=f"m-bar[{name}]")
                    + step(assign.counit(f12), right=[B_T, inv], label="eps")
                )
                m = beta.inverse()
            else:
                m = evaluate_pasting(
                    step(assign.unit(f12), right=[B_T, inv], label="eta")
                    + step(bar, left=[s12], right=[inv], inverted=True, label=f"m-bar[{name}]")
                    + step(pair_trans(assign.counit(f1), assign.counit(f2)), left=[s12, B_S], label="eps")
                )
        except NotIso as exc:
            raise NotInvertible(f"cannot recover m along ({name}): {exc}", [name]) from exc
        recovered[(f1, f2)] = _retyped(
            m, compose_functors(B_T, inv), compose_functors(s12, B_S), f"m[{name}]"
        )
    return recovered


def opposite_ets(e: ETSData, transpose: Transpose, assign: AdjointAssignment) -> ETSData:
    """m-bar as a tensor structure on the direct-variance fibered category of adjoints."""
    return ETSData(derive_opposite_conn(e.host, assign), e.box, dict(transpose.family), f"{e.name}-bar")


def check_m_transpose(e: ETSData, assign: AdjointAssignment) -> CheckReport:
    """
    Adjointability verdicts of m, the monoidality condition of m-bar over the
    derived fibered category, and the roundtrip m -> m-bar -> m.
    """
    side = assign.side.value
    report = CheckReport(suite="adjoint")
    for law in (f"m-adjointable-{side}", f"m-roundtrip-{side}"):
        report.law(law)
    transpose = transpose_m(e, assign)
    for key in transpose.failures():
        report.add(f"m-adjointable-{side}", [e.name, _pair_name(e.host, *key)], transpose.witnesses.get(key, ""))
    if not transpose.adjointable:
        report.skip(f"m-opposite-{side}: not adjointable")
        return report
    report.merge(check_mets(opposite_ets(e, transpose, assign)), f"m-opposite-{side}")
    back = transpose_back_m(e, transpose.family, assign)
    for key, m in back.items():
        if m != e.m[key]:
            report.add(f"m-roundtrip-{side}", [e.name, _pair_name(e.host, *key)])
    return report


def check_projection_formula(e: ETSData, assign: AdjointAssignment) -> CheckReport:
    """
    Adjointability of m on the pairs (f, id) and (id, f) alone, and whether
    that partial verdict agrees with adjointability over all pairs.
    """
    cat = e.host.base.cat
    report = CheckReport(suite="adjoint")
    report.law("projection-formula")
    report.law("projection-agreement")
    transpose = transpose_m(e, assign)
    partial = [k for k in transpose.verdicts if cat.is_identity(k[0]) or cat.is_identity(k[1])]
    for key in sorted(partial):
        if not transpose.verdicts[key]:
            report.add("projection-formula", [e.name, _pair_name(e.host, *key)], transpose.witnesses.get(key, ""))
    partial_ok = all(transpose.verdicts[k] for k in partial)
    if partial_ok != transpose.adjointable:
        report.add(
            "projection-agreement",
            [e.name, assign.side.value],
            f"partial verdict {partial_ok}, full verdict {transpose.adjointable}",
        )
    return report


def _pentagon(e: ETSData, a: AssocConstraint, S: Tuple[int, int, int, int]) -> Tuple[PastingTerm, PastingTerm]:
    h = e.host
    S1, S2, S3, S4 = S
    H1, H2, H3, H4 = (h.fiber(x) for x in S)
    S12, S23, S34 = _x(h, S1, S2), _x(h, S2, S3), _x(h, S3, S4)
    S123, S234 = _x(h, S12, S3), _x(h, S23, S4)
    B = e.box_at
    I = IdentityFunctor
    H12 = product(H1, H2)
    first = step(
        a.at(h, (S12, S3, S4)),
        right=[PairFunctor(PairFunctor(B(S1, S2), I(H3)), I(H4))],
        label="a[12,3,4]",
    ) + step(
        a.at(h, (S1, S2, S34)),
        right=[PairFunctor(I(H12), B(S3, S4)), reassociate(H12, H3, H4)],
        label="a[1,2,34]",
    )
    inner = compose_functors(PairFunctor(I(H1), B(S2, S3)), reassociate(H1, H2, H3))
    second = (
        step(
            pair_trans(a.at(h, (S1, S2, S3)), _identity(I(H4))),
            left=[B(S123, S4)],
            label="a[1,2,3]",
        )
        + step(a.at(h, (S1, S23, S4)), right=[PairFunctor(inner, I(H4))], label="a[1,23,4]")
        + step(
            pair_trans(_identity(I(H1)), a.at(h, (S2, S3, S4))),
            left=[B(S1, S234)],
            right=[RebracketFunctor((H1, H2, H3, H4), (((0, 1), 2), 3), (0, ((1, 2), 3)))],
            label="a[2,3,4]",
        )
    )
    return first, second


def _pentagon_values(
    e: ETSData, a: AssocConstraint, S: Tuple[int, int, int, int]
) -> Tuple[NatTrans, NatTrans]:
    """Both sides of the pentagon at S, evaluated and memoised on the host."""

    def evaluate() -> Tuple[NatTrans, NatTrans]:
        first, second = _pentagon(e, a, S)
        return evaluate_pasting(first), evaluate_pasting(second)

    return _cached(e.host, ("pentagon", id(e.box), id(a), S), (e.box, a), evaluate)


def _assoc_square(
    e: ETSData, a: AssocConstraint, f1: int, f2: int, f3: int
) -> Tuple[PastingTerm, PastingTerm]:
    h = e.host
    b = h.base
    (S1, T1), (S2, T2), (S3, T3) = h.ends(f1), h.ends(f2), h.ends(f3)
    F1, F2, F3 = h.functor(f1), h.functor(f2), h.functor(f3)
    f12, f23 = product_of_morphisms(b, f1, f2), product_of_morphisms(b, f2, f3)
    f123 = product_of_morphisms(b, f12, f3)
    B = e.box_at
    I = IdentityFunctor
    H1, H2, H3 = h.fiber(S1), h.fiber(S2), h.fiber(S3)
    reassoc = reassociate(H1, H2, H3)
    top = (
        step(pair_trans(e.m_at(f1, f2), _identity(F3)), left=[B(_x(h, T1, T2), T3)], label="m[1,2]")
        + step(e.m_at(f12, f3), right=[PairFunctor(B(S1, S2), I(H3))], label="m[12,3]")
        + step(a.at(h, (S1, S2, S3)), left=[h.functor(f123)], label="a_in")
    )
    bottom = (
        step(a.at(h, (T1, T2, T3)), right=[PairFunctor(PairFunctor(F1, F2), F3)], label="a_out")
        + step(
            pair_trans(_identity(F1), e.m_at(f2, f3)),
            left=[B(T1, _x(h, T2, T3))],
            right=[reassoc],
            label="m[2,3]",
        )
        + step(e.m_at(f1, f23), right=[PairFunctor(I(H1), B(S2, S3)), reassoc], label="m[1,23]")
    )
    return top, bottom


def assoc_boundary(e: ETSData, S1: int, S2: int, S3: int) -> Tuple[Functor, Functor]:
    """(A1 ⊠ A2) ⊠ A3 and A1 ⊠ (A2 ⊠ A3) as functors on ((H1 x H2) x H3)."""
    h = e.host
    H1, H2, H3 = h.fiber(S1), h.fiber(S2), h.fiber(S3)
    LA = compose_functors(
        e.box_at(_x(h, S1, S2), S3), PairFunctor(e.box_at(S1, S2), IdentityFunctor(H3))
    )
    RA = compose_functors(
        e.box_at(S1, _x(h, S2, S3)),
        PairFunctor(IdentityFunctor(H1), e.box_at(S2, S3)),
        reassociate(H1, H2, H3),
    )
    return LA, RA


def _check_assoc_boundary(e: ETSData, a: AssocConstraint, report: CheckReport) -> None:
    h = e.host
    name = h.base.cat.object_name
    report.law("a-boundary")
    report.law("a-iso")
    objects = h.base.cat.objects()
    for S1, S2, S3 in cartesian(objects, repeat=3):
        witness = [a.name, name(S1), name(S2), name(S3)]
        try:
            t = a.at(h, (S1, S2, S3))
            LA, RA = assoc_boundary(e, S1, S2, S3)
        except FibcatError as exc:
            report.add("a-boundary", witness, str(exc))
            continue
        if not (same_functor(t.source, LA) and same_functor(t.target, RA)):
            report.add("a-boundary", witness)
            continue
        check_iso(report, "a-iso", t, witness)


def check_assoc(e: ETSData, a: AssocConstraint) -> CheckReport:
    """
    Check an associativity constraint: the pentagon over every quadruple of
    base objects and its compatibility with m over every triple of pairs
    carrying m.
    """
    h = e.host
    b = h.base
    cat = b.cat
    report = CheckReport(suite="ets")
    _check_assoc_boundary(e, a, report)
    report.law("aETS-1")
    report.law("aETS-2")
    if not report.passed:
        report.skip("aETS: constraint data malformed")
        return report
    for quad in cartesian(cat.objects(), repeat=4):
        S = cast(Tuple[int, int, int, int], quad)
        witness = [a.name, *(cat.object_name(x) for x in S)]
        try:
            first, second = _pentagon_values(e, a, S)
        except (PastingTypeError, MissingData) as exc:
            report.add("aETS-1", witness, str(exc))
            continue
        except NotIso as exc:
            report.add("aETS-1", witness, f"not invertible: {exc}")
            continue
        compare_trans(report, "aETS-1", first, second, witness, terms=partial(_pentagon, e, a, S))

    members = set(e.pairs())
    for f1, f2, f3 in cartesian(h.morphisms(), repeat=3):
        if (f1, f2) not in members or (f2, f3) not in members:
            continue
        f12, f23 = product_of_morphisms(b, f1, f2), product_of_morphisms(b, f2, f3)
        if (f12, f3) not in members or (f1, f23) not in members:
            continue
        witness = [a.name, *(cat.morphism_name(f) for f in (f1, f2, f3))]
        try:
            top, bottom = _assoc_square(e, a, f1, f2, f3)
            compare_terms(report, "aETS-2", top, bottom, witness)
        except (PastingTypeError, MissingData) as exc:
            report.add("aETS-2", witness, str(exc))
    return report


def symmetry(h: FiberedCat, a: int, c: int) -> int:
    """The base morphism t with F(t): H(c x a) -> H(a x c)."""
    if h.variance == Variance.INVERSE:
        return tau(h.base, a, c)
    return tau(h.base, c, a)


def comm_boundary(e: ETSData, S1: int, S2: int) -> Tuple[Functor, Functor]:
    """(A1 ⊠ A2, τ^*(A2 ⊠ A1)) as functors on H1 x H2."""
    h = e.host
    target = compose_functors(
        h.functor(symmetry(h, S1, S2)), e.box_at(S2, S1), swap(h.fiber(S1), h.fiber(S2))
    )
    return e.box_at(S1, S2), target


def _comm_hexagon(
    e: ETSData, c: CommConstraint, f1: int, f2: int
) -> Tuple[PastingTerm, PastingTerm, bool]:
    h = e.host
    b = h.base
    (S1, T1), (S2, T2) = h.ends(f1), h.ends(f2)
    F1, F2 = h.functor(f1), h.functor(f2)
    t_in, t_out = symmetry(h, S1, S2), symmetry(h, T1, T2)
    f12, f21 = product_of_morphisms(b, f1, f2), product_of_morphisms(b, f2, f1)
    B_S21 = e.box_at(S2, S1)
    swap_S = swap(h.fiber(S1), h.fiber(S2))
    first = step(c.at(h, (T1, T2)), right=[PairFunctor(F1, F2)], label="c_out") + step(
        e.m_at(f2, f1), left=[h.functor(t_out)], right=[swap_S], label="m[2,1]"
    )
    second = (
        step(e.m_at(f1, f2), label="m[1,2]")
        + step(c.at(h, (S1, S2)), left=[h.functor(f12)], label="c_in")
        + step(split(h, f12, t_in), right=[B_S21, swap_S], inverted=True, label="conn")
        + step(split(h, t_out, f21), right=[B_S21, swap_S], label="conn")
    )
    commutes = composite_of(h, f12, t_in) == composite_of(h, t_out, f21)
    return first, second, commutes


def check_comm(e: ETSData, c: CommConstraint) -> CheckReport:
    """
    Check a commutativity constraint: involutivity over every pair of base
    objects and compatibility with m over every pair carrying m in both orders.
    """
    h = e.host
    b = h.base
    cat = b.cat
    name = cat.object_name
    report = CheckReport(suite="ets")
    for law in ("c-boundary", "c-iso", "cETS-1", "cETS-2"):
        report.law(law)
    for S1, S2 in cartesian(cat.objects(), repeat=2):
        witness = [c.name, name(S1), name(S2)]
        try:
            t = c.at(h, (S1, S2))
            source, target = comm_boundary(e, S1, S2)
            ok = same_functor(t.source, source) and same_functor(t.target, target)
        except FibcatError as exc:
            report.add("c-boundary", witness, str(exc))
            continue
        if not ok:
            report.add("c-boundary", witness)
            continue
        check_iso(report, "c-iso", t, witness)
    if not report.passed:
        report.skip("cETS: constraint data malformed")
        return report

    for S1, S2 in cartesian(cat.objects(), repeat=2):
        witness = [c.name, name(S1), name(S2)]
        t12, t21 = symmetry(h, S1, S2), symmetry(h, S2, S1)
        if not cat.is_identity(composite_of(h, t12, t21)):
            report.add("cETS-1", witness, "symmetry is not involutive")
            continue
        B12 = e.box_at(S1, S2)
        term = (
            step(c.at(h, (S1, S2)), label="c12")
            + step(
                c.at(h, (S2, S1)),
                left=[h.functor(t12)],
                right=[swap(h.fiber(S1), h.fiber(S2))],
                label="c21",
            )
            + step(split(h, t12, t21), right=[B12], inverted=True, label="conn")
        )
        compare_terms(report, "cETS-1", term, PastingTerm.identity(B12), witness)

    members = set(e.pairs())
    for f1, f2 in sorted(members):
        if (f2, f1) not in members:
            continue
        witness = [c.name, cat.morphism_name(f1), cat.morphism_name(f2)]
        try:
            first, second, commutes = _comm_hexagon(e, c, f1, f2)
        except MissingData as exc:
            report.add("cETS-2", witness, str(exc))
            continue
        if not commutes:
            report.add("cETS-2", witness, "symmetry is not natural")
            continue
        try:
            compare_terms(report, "cETS-2", first, second, witness)
        except PastingTypeError as exc:
            report.add("cETS-2", witness, f"ill-typed: {exc}")
    return report


def check_constraints(
    e: ETSData, a: Optional[AssocConstraint], c: Optional[CommConstraint], prefix: str = ""
) -> CheckReport:
    """Both constraint checks folded into one report, skipping absent constraints."""
    report = CheckReport(suite="ets")
    if a is not None:
        report.merge(check_assoc(e, a), prefix or None)
    if c is not None:
        report.merge(check_comm(e, c), prefix or None)
    return report


def check_skeleton_constraints(
    s: ETSkeletonData, a: Optional[AssocConstraint], c: Optional[CommConstraint]
) -> CheckReport:
    """
    Constraints on a tensor skeleton: against m^sm and m^cl separately, then
    the lifted constraints against the extended m.
    """
    report = CheckReport(suite="ets-skeleton")
    report.merge(check_constraints(s.smooth_part(), a, c), "sm")
    report.merge(check_constraints(s.closed_part(), a, c), "cl")
    try:
        extended = extend_ets_skeleton(s)
    except ExtensionFailure as exc:
        report.skip(f"lifted constraints: {exc}")
        return report
    report.merge(check_constraints(extended, a, c), "lifted")
    return report


def transport_constraints(
    e: ETSData, a: Optional[AssocConstraint], c: Optional[CommConstraint], assign: AdjointAssignment
) -> CheckReport:
    """
    The same constraints checked against m-bar over the derived direct-variance
    fibered category; c is only transported where the symmetry functors agree.
    """
    side = assign.side.value
    report = CheckReport(suite="adjoint")
    transpose = transpose_m(e, assign)
    if not transpose.adjointable:
        report.skip(f"transported constraints ({side}): m not adjointable")
        return report
    opposite = opposite_ets(e, transpose, assign)
    if a is not None:
        report.merge(check_assoc(opposite, a), f"transported-{side}")
    if c is not None:
        h, hb = e.host, opposite.host
        objects = h.base.cat.objects()
        fits = all(
            hb.in_scope(symmetry(hb, S1, S2))
            and same_functor(h.functor(symmetry(h, S1, S2)), hb.functor(symmetry(hb, S1, S2)))
            for S1, S2 in cartesian(objects, repeat=2)
        )
        if fits:
            report.merge(check_comm(opposite, c), f"transported-{side}")
        else:
            report.skip(f"transported commutativity ({side}): symmetry functors differ")
    return report


def ets_skeleton_to_core(
    s: ETSkeletonData, closed_right: AdjointAssignment, smooth_left: AdjointAssignment
) -> ETCoreData:
    """
    Replace m^cl by its transpose along the right adjoints.

    Raises:
        NotInvertible: If a transposed component has no inverse
    """
    transpose = transpose_m(s.closed_part(), closed_right)
    if not transpose.adjointable:
        failed = transpose.failures()[0]
        raise NotInvertible(
            f"m^cl of {s.name} is not right-adjointable",
            [_pair_name(s.host, *failed), transpose.witnesses.get(failed, "")],
        )
    return ETCoreData(
        s.host, s.box, dict(s.m_sm), dict(transpose.family), smooth_left, closed_right, s.name
    )


def ets_core_to_skeleton(c: ETCoreData) -> ETSkeletonData:
    """
    Recover m^cl from m-bar^cl.

    Raises:
        NotInvertible: If a recovered component has no inverse
    """

    def recover() -> ETSkeletonData:
        closed = ETSData(c.host, c.box, {}, c.name)
        m_cl = transpose_back_m(closed, c.m_cl_bar, c.closed_right)
        return ETSkeletonData(c.host, c.box, dict(c.m_sm), m_cl, c.name)

    key = (
        "core-to-skeleton",
        c.name,
        id(c.box),
        _family_ids(c.m_sm),
        _family_ids(c.m_cl_bar),
        id(c.closed_right),
    )
    pins = (c.box, tuple(c.m_sm.values()), tuple(c.m_cl_bar.values()), c.closed_right)
    return _cached(c.host, key, pins, recover)


def closed_direct_ets(c: ETCoreData) -> ETSData:
    """m-bar^cl as a tensor structure on the direct-image fibered category."""
    return ETSData(
        derive_opposite_conn(c.host, c.closed_right), c.box, dict(c.m_cl_bar), f"{c.name}-bar^closed"
    )


def _etc_hexagon(
    c: ETCoreData, sq1: MixedSquare, sq2: MixedSquare, bc: Callable[[MixedSquare], NatTrans]
) -> Tuple[PastingTerm, PastingTerm]:
    """Both sides of the tensor exchange hexagon on a pair of Cartesian squares."""
    h = c.host
    b = h.base
    cat = b.cat
    cr = c.closed_right
    q12, h12, z12, p12 = (
        product_of_morphisms(b, x1, x2)
        for x1, x2 in ((sq1.q, sq2.q), (sq1.h, sq2.h), (sq1.z, sq2.z), (sq1.p, sq2.p))
    )
    B_P = c.box[(cat.cod(sq1.h), cat.cod(sq2.h))]
    B_Z = c.box[(cat.dom(sq1.z), cat.dom(sq2.z))]
    bc12, bc1, bc2 = bc(MixedSquare(q12, h12, z12, p12)), bc(sq1), bc(sq2)
    zs = PairFunctor(cr.adjoint(sq1.z), cr.adjoint(sq2.z))
    qs = PairFunctor(h.functor(sq1.q), h.functor(sq2.q))
    top = (
        step(c.m_sm[(sq1.p, sq2.p)], right=[zs], label="m_sm[p]")
        + step(c.m_cl_bar[(sq1.z, sq2.z)], left=[h.functor(p12)], label="m-bar[z]")
        + step(bc12, right=[B_Z], label="bc12")
    )
    bottom = (
        step(pair_trans(bc1, bc2), left=[B_P], label="bc1xbc2")
        + step(c.m_cl_bar[(sq1.h, sq2.h)], right=[qs], label="m-bar[h]")
        + step(c.m_sm[(sq1.q, sq2.q)], left=[cr.adjoint(h12)], label="m_sm[q]")
    )
    return top, bottom


def check_etc(c: ETCoreData) -> CheckReport:
    """
    Check a tensor core: monoidality and left-adjointability of m^sm,
    monoidality of m-bar^cl over the direct-image category, the hexagon over
    pairs of Cartesian squares (C') and the triangle condition with m^cl
    recovered from m-bar^cl.
    """
    h = c.host
    report = CheckReport(suite="etc")
    for law in ("adjointable-sm", "C'-ETC-1", "T-ETS-1"):
        report.law(law)
    smooth = c.smooth_part()
    report.merge(check_mets(smooth, boundary_law="ETC-0"), "sm")
    transpose = transpose_m(smooth, c.smooth_left)
    for key in transpose.failures():
        report.add("adjointable-sm", [_pair_name(h, *key)], transpose.witnesses.get(key, ""))
    report.merge(check_mets(closed_direct_ets(c), boundary_law="ETC-0"), "cl-direct")
    if not report.passed:
        report.skip("C'-ETC-1, T-ETS-1: component structures fail their axioms")
        return report

    check_pullbacks(h.base, report)
    base_change: Dict[MixedSquare, NatTrans] = {}

    def bc(square: MixedSquare) -> NatTrans:
        if square not in base_change:
            base_change[square] = beck_chevalley_right(h, square, c.closed_right)[0]
        return base_change[square]

    squares = cartesian_squares(h.base)
    for sq1, sq2 in cartesian(squares, squares):
        witness = _square_pair_witness(smooth, sq1, sq2)
        try:
            top, bottom = _etc_hexagon(c, sq1, sq2, bc)
            compare_terms(report, "C'-ETC-1", top, bottom, witness)
        except (PastingTypeError, NotIso, SquareNotCommuting, KeyError, MissingData) as exc:
            report.add("C'-ETC-1", witness, str(exc))

    try:
        skeleton = ets_core_to_skeleton(c)
    except NotInvertible as exc:
        report.add("T-ETS-1", list(exc.witness), f"m^cl not recoverable: {exc}")
        return report
    _check_triangle_pairs(skeleton, report)
    return report


def _mor_hexagon(
    e1: ETSData,
    e2: ETSData,
    functors: Sequence[Functor],
    theta: Mapping[int, NatTrans],
    rho: Mapping[Pair, NatTrans],
    f1: int,
    f2: int,
) -> Tuple[PastingTerm, PastingTerm]:
    h1, h2 = e1.host, e2.host
    (in1, out1), (in2, out2) = h1.ends(f1), h1.ends(f2)
    f12 = product_of_morphisms(h1.base, f1, f2)
    O12 = _x(h1, out1, out2)
    first = (
        step(e2.m_at(f1, f2), right=[PairFunctor(functors[in1], functors[in2])], label="m2")
        + step(rho[(in1, in2)], left=[h2.functor(f12)], label="rho_in")
        + step(theta[f12], right=[e1.box_at(in1, in2)], label="theta[f12]")
    )
    second = (
        step(pair_trans(theta[f1], theta[f2]), left=[e2.box_at(out1, out2)], label="theta x theta")
        + step(rho[(out1, out2)], right=[PairFunctor(h1.functor(f1), h1.functor(f2))], label="rho_out")
        + step(e1.m_at(f1, f2), left=[functors[O12]], label="m1")
    )
    return first, second


def rho_boundary(
    e1: ETSData, e2: ETSData, functors: Sequence[Functor], S1: int, S2: int
) -> Tuple[Functor, Functor]:
    """(R(A1) ⊠2 R(A2), R(A1 ⊠1 A2)) as functors on H1(S1) x H1(S2)."""
    source = compose_functors(e2.box_at(S1, S2), PairFunctor(functors[S1], functors[S2]))
    target = compose_functors(functors[_x(e1.host, S1, S2)], e1.box_at(S1, S2))
    return source, target


def check_rho(
    e1: ETSData,
    e2: ETSData,
    functors: Sequence[Functor],
    theta: Mapping[int, NatTrans],
    rho: Mapping[Pair, NatTrans],
    label: str = "rho",
) -> CheckReport:
    """
    The ρ hexagon over every pair carrying m on both sides whose legs and
    product carry θ, plus the boundary and invertibility of each ρ component.
    """
    h1 = e1.host
    b = h1.base
    cat = b.cat
    report = CheckReport(suite="ets")
    for law in ("rho-boundary", "rho-iso", "mor-ETS"):
        report.law(law)
    for (S1, S2), r in sorted(rho.items()):
        witness = [label, cat.object_name(S1), cat.object_name(S2)]
        try:
            source, target = rho_boundary(e1, e2, functors, S1, S2)
        except FibcatError as exc:
            report.add("rho-boundary", witness, str(exc))
            continue
        if not (same_functor(r.source, source) and same_functor(r.target, target)):
            report.add("rho-boundary", witness)
            continue
        check_iso(report, "rho-iso", r, witness)
    if not report.passed:
        report.skip(f"mor-ETS: {label} data malformed")
        return report

    keys = sorted(set(e1.pairs()) & set(e2.pairs()))
    for f1, f2 in keys:
        if f1 not in theta or f2 not in theta or product_of_morphisms(b, f1, f2) not in theta:
            continue
        witness = [label, _pair_name(h1, f1, f2)]
        try:
            first, second = _mor_hexagon(e1, e2, functors, theta, rho, f1, f2)
            compare_terms(report, "mor-ETS", first, second, witness)
        except (PastingTypeError, KeyError, MissingData) as exc:
            report.add("mor-ETS", witness, str(exc))
    return report


def check_mor_ets(r: MorETS) -> CheckReport:
    """The ρ hexagon over every pair of base morphisms."""
    m = r.morphism
    return check_rho(r.source_ets, r.target_ets, m.functors, m.theta, r.rho, r.name)


def _rho_coincide(rho_sm: Mapping[Pair, NatTrans], rho_cl: Mapping[Pair, NatTrans], h: FiberedCat, report: CheckReport) -> None:
    name = h.base.cat.object_name
    report.law("rho-coincide")
    for key in sorted(set(rho_sm) | set(rho_cl)):
        witness = [name(key[0]), name(key[1])]
        if key not in rho_sm or key not in rho_cl:
            report.add("rho-coincide", witness, "present on one side only")
        elif rho_sm[key] != rho_cl[key]:
            report.add("rho-coincide", witness)


def check_mor_ets_skeleton(r: MorETSkeletonData) -> CheckReport:
    """ρ^sm = ρ^cl, then the ρ hexagon over smooth pairs and over closed pairs."""
    s = r.skeleton
    report = CheckReport(suite="ets-skeleton")
    _rho_coincide(r.rho_sm, r.rho_cl, s.source, report)
    report.merge(
        check_rho(r.source_ets.smooth_part(), r.target_ets.smooth_part(), s.functors, s.theta_sm, r.rho_sm, r.name),
        "sm",
    )
    report.merge(
        check_rho(r.source_ets.closed_part(), r.target_ets.closed_part(), s.functors, s.theta_cl, r.rho_cl, r.name),
        "cl",
    )
    return report


def check_mor_etc(r: MorETCoreData) -> CheckReport:
    """
    ρ^sm = ρ^cl, the ρ hexagon over smooth pairs with m^sm and θ^sm, and over
    closed pairs in the direct-image variance with m-bar^cl and θ-bar^cl.
    """
    core = r.core
    report = CheckReport(suite="etc")
    _rho_coincide(r.rho_sm, r.rho_cl, core.source, report)
    report.merge(
        check_rho(
            r.source_ets.smooth_part(), r.target_ets.smooth_part(), core.functors, core.theta_sm, r.rho_sm, r.name
        ),
        "sm",
    )
    report.merge(
        check_rho(
            closed_direct_ets(r.source_ets),
            closed_direct_ets(r.target_ets),
            core.functors,
            core.theta_cl_bar,
            r.rho_cl,
            r.name,
        ),
        "cl-direct",
    )
    return report


def transport_rho(
    r: MorETS, assignments: Sequence[Tuple[AdjointAssignment, AdjointAssignment]]
) -> CheckReport:
    """
    The same ρ checked against the ρ hexagon of the transposed structures
    (θ-bar, m-bar on both sides) for each pair of source/target assignments.
    Pairs whose θ or m is not adjointable are skipped with the reason.
    """
    report = CheckReport(suite="ets")
    for assign1, assign2 in assignments:
        side = assign1.side.value
        theta = transpose_theta(r.morphism, assign1, assign2)
        if not theta.adjointable:
            report.skip(f"transported rho ({side}): theta not adjointable")
            continue
        m1, m2 = transpose_m(r.source_ets, assign1), transpose_m(r.target_ets, assign2)
        if not (m1.adjointable and m2.adjointable):
            report.skip(f"transported rho ({side}): m not adjointable")
            continue
        d1 = opposite_ets(r.source_ets, m1, assign1)
        d2 = opposite_ets(r.target_ets, m2, assign2)
        report.merge(check_mets(d1), f"opposite-{side}:source")
        report.merge(check_mets(d2), f"opposite-{side}:target")
        report.merge(
            check_rho(d1, d2, r.morphism.functors, theta.family, r.rho, r.name), f"transported-{side}"
        )
    return report


def ets_agreement(s: ETSkeletonData, full: Optional[CheckReport] = None) -> Tuple[bool, bool]:
    """Verdicts of the tensor exchange check and of the C/T check on the same skeleton."""
    ex = full if full is not None else check_ets_skeleton(s)
    return ex.passed, check_ets_CT(s).passed
