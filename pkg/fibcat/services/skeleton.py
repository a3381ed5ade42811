"""
Skeleta and cores of morphisms of fibered categories: exchange conditions,
the factorization extension, and conversion between skeleta and cores.
"""
from typing import Dict, List, Optional, Sequence, Tuple

from config import get_logger
from config.constants import Marked
from fibcat.exceptions import (
    CompositionFailure,
    ExtensionFailure,
    IndependenceFailure,
    NotInvertible,
    NotIso,
    PastingTypeError,
)
from fibcat.models.adjoint import AdjointAssignment
from fibcat.models.base import MixedSquare, Triangle
from fibcat.models.category import NatTrans, PastingTerm
from fibcat.models.fibered import FibMorphism
from fibcat.models.report import CheckReport
from fibcat.models.skeleton import CoreData, SkeletonData
from fibcat.services.adjoint import (
    beck_chevalley_right,
    derive_opposite_conn,
    transpose_back_theta,
    transpose_theta,
)
from fibcat.services.base import (
    cartesian_squares,
    check_pullbacks,
    fact_category,
    mixed_squares,
    triangles,
)
from fibcat.services.fibered import Leg, check_mor_axioms, path_theta, single, step
from fibcat.services.fincat import compare_terms, evaluate_pasting

logger = get_logger(__name__)


def _square_witness(s: SkeletonData, square: MixedSquare) -> List[str]:
    name = s.source.base.cat.morphism_name
    return [name(square.q), name(square.h), name(square.z), name(square.p)]


def _theta_path(s: SkeletonData, legs: Sequence[Leg]) -> PastingTerm:
    return path_theta(s.source, s.target, s.functors, legs)


def _check_parts(s: SkeletonData, report: CheckReport) -> None:
    report.merge(check_mor_axioms(s.part(Marked.SMOOTH)), "sm")
    report.merge(check_mor_axioms(s.part(Marked.CLOSED)), "cl")


def _check_exchange(s: SkeletonData, squares: Sequence[MixedSquare], law: str, report: CheckReport) -> None:
    report.law(law)
    for square in squares:
        try:
            compare_terms(
                report,
                law,
                _theta_path(s, [(square.h, s.theta_cl), (square.p, s.theta_sm)]),
                _theta_path(s, [(square.q, s.theta_sm), (square.z, s.theta_cl)]),
                _square_witness(s, square),
            )
        except PastingTypeError as exc:
            report.add(law, _square_witness(s, square), f"ill-typed: {exc}")


def _check_triangles(s: SkeletonData, found: Sequence[Triangle], report: CheckReport) -> None:
    name = s.source.base.cat.morphism_name
    report.law("T")
    for t in found:
        compare_terms(
            report,
            "T",
            single(s.theta_sm[t.q], f"theta_sm[{name(t.q)}]"),
            _theta_path(s, [(t.h, s.theta_cl), (t.p, s.theta_sm)]),
            [name(t.h), name(t.p), name(t.q)],
        )


def check_skeleton(s: SkeletonData) -> CheckReport:
    """
    Check the exchange condition over every mixed square, plus the
    per-subcategory morphism axioms and θ^sm = θ^cl on doubly marked morphisms.
    """
    b = s.source.base
    report = CheckReport(suite="skeleton")
    _check_parts(s, report)
    if not report.passed:
        report.skip("ex: subcategory structures fail their axioms")
        return report
    report.law("coincide")
    for f in sorted(b.smooth & b.closed):
        if f in s.theta_sm and f in s.theta_cl and s.theta_sm[f] != s.theta_cl[f]:
            report.add("coincide", [b.cat.morphism_name(f)])
    squares = mixed_squares(b)
    _check_exchange(s, squares, "ex", report)
    logger.debug(f"Skeleton {s.name}: {len(squares)} mixed squares")
    return report


def check_skeleton_CT(s: SkeletonData) -> CheckReport:
    """The exchange condition on Cartesian squares (C) and on triangles (T) only."""
    b = s.source.base
    report = CheckReport(suite="skeleton-ct")
    _check_parts(s, report)
    if not report.passed:
        report.skip("C, T: subcategory structures fail their axioms")
        return report
    check_pullbacks(b, report)
    _check_exchange(s, cartesian_squares(b), "C", report)
    _check_triangles(s, triangles(b), report)
    return report


def extend_skeleton(s: SkeletonData) -> FibMorphism:
    """
    Extend a skeleton to θ on every base morphism.

    θ_f is θ^cl_t followed by θ^sm_p along each factorization f = p ∘ t;
    every factorization must give the same value, and the assembled family
    must satisfy the morphism axioms.

    Raises:
        IndependenceFailure: Two factorizations disagree (both are witnesses)
        CompositionFailure: The assembled θ fails the composition axiom
    """
    b = s.source.base
    cat = b.cat
    theta: Dict[int, NatTrans] = {}
    report = CheckReport(suite="extend")
    report.law("independence")
    for f in cat.morphisms():
        fc = fact_category(b, f)
        if not fc.objects:
            raise ExtensionFailure(f"{cat.morphism_name(f)} has no factorization", report)
        values: List[Tuple[int, NatTrans]] = []
        for index, obj in enumerate(fc.objects):
            legs = [(obj.closed_part, s.theta_cl), (obj.smooth_part, s.theta_sm)]
            values.append((index, evaluate_pasting(_theta_path(s, legs))))
        first_index, first = values[0]
        for index, value in values[1:]:
            if value.components != first.components:
                witness = [cat.morphism_name(f)]
                for i in (first_index, index):
                    obj = fc.objects[i]
                    witness.append(
                        f"{cat.morphism_name(obj.smooth_part)}∘{cat.morphism_name(obj.closed_part)}"
                    )
                report.add("independence", witness)
                raise IndependenceFailure(
                    f"theta along {cat.morphism_name(f)} depends on the factorization", report
                )
        theta[f] = first.named(f"theta[{cat.morphism_name(f)}]")
    extended = FibMorphism(s.source, s.target, s.functors, theta, s.name)
    axioms = check_mor_axioms(extended)
    if not axioms.passed:
        raise CompositionFailure(f"extension of {s.name} fails the composition axiom", axioms)
    logger.info(f"Extended skeleton {s.name} to {len(theta)} morphisms")
    return extended


def restrict_to_skeleton(m: FibMorphism) -> SkeletonData:
    """θ restricted to smooth and to closed morphisms."""
    b = m.base
    return SkeletonData(
        m.source,
        m.target,
        m.functors,
        {f: t for f, t in m.theta.items() if f in b.smooth},
        {f: t for f, t in m.theta.items() if f in b.closed},
        m.name,
    )


def skeleton_to_core(
    s: SkeletonData,
    closed_right: Tuple[AdjointAssignment, AdjointAssignment],
    smooth_left: Tuple[AdjointAssignment, AdjointAssignment],
) -> CoreData:
    """
    Replace θ^cl by its transpose along the right adjoints z_*.

    Raises:
        NotInvertible: If a transposed component has no inverse
    """
    transpose = transpose_theta(s.part(Marked.CLOSED), *closed_right)
    if not transpose.adjointable:
        cat = s.source.base.cat
        failed = transpose.failures()
        raise NotInvertible(
            f"theta^cl of {s.name} is not right-adjointable",
            [cat.morphism_name(failed[0]), transpose.witnesses.get(failed[0], "")],
        )
    return CoreData(
        s.source,
        s.target,
        s.functors,
        dict(s.theta_sm),
        dict(transpose.family),
        smooth_left,
        closed_right,
        s.name,
    )


def core_to_skeleton(c: CoreData) -> SkeletonData:
    """
    Recover θ^cl from θ-bar^cl.

    Raises:
        NotInvertible: If a recovered component has no inverse
    """
    closed = FibMorphism(c.source, c.target, c.functors, {}, c.name)
    theta_cl = transpose_back_theta(closed, c.theta_cl_bar, *c.closed_right)
    return SkeletonData(c.source, c.target, c.functors, dict(c.theta_sm), theta_cl, c.name)


def closed_direct_part(c: CoreData) -> FibMorphism:
    """θ-bar^cl as a morphism of the direct-image fibered categories."""
    return FibMorphism(
        derive_opposite_conn(c.source, c.closed_right[0]),
        derive_opposite_conn(c.target, c.closed_right[1]),
        c.functors,
        dict(c.theta_cl_bar),
        f"{c.name}-bar^closed",
    )


def _core_hexagon(c: CoreData, square: MixedSquare) -> Tuple[PastingTerm, PastingTerm]:
    """Both sides of the exchange hexagon on one Cartesian square."""
    H1, H2 = c.source, c.target
    cr1, cr2 = c.closed_right
    q, h, z, p = square.q, square.h, square.z, square.p
    cat = H1.base.cat
    P, Z = cat.cod(h), cat.dom(z)
    R_P, R_Z = c.functors[P], c.functors[Z]
    bc1, _ = beck_chevalley_right(H1, square, cr1)
    bc2, _ = beck_chevalley_right(H2, square, cr2)
    name = cat.morphism_name
    first = (
        step(c.theta_cl_bar[z], left=[H2.functor(p)], label=f"theta-bar[{name(z)}]")
        + step(c.theta_sm[p], right=[cr1.adjoint(z)], label=f"theta_sm[{name(p)}]")
        + step(bc1, left=[R_P], label="bc1")
    )
    second = (
        step(bc2, right=[R_Z], label="bc2")
        + step(c.theta_sm[q], left=[cr2.adjoint(h)], label=f"theta_sm[{name(q)}]")
        + step(c.theta_cl_bar[h], right=[H1.functor(q)], label=f"theta-bar[{name(h)}]")
    )
    return first, second


def check_core(c: CoreData) -> CheckReport:
    """
    Check a core: left-adjointability and axioms of θ^sm, the direct-image
    axioms of θ-bar^cl, the hexagon over Cartesian squares (C') and the
    triangle condition (T) with θ^cl recovered from θ-bar^cl.
    """
    b = c.source.base
    cat = b.cat
    report = CheckReport(suite="core")
    for law in ("adjointable-sm", "C'", "T"):
        report.law(law)

    smooth = c.smooth_part()
    report.merge(check_mor_axioms(smooth), "sm")
    transpose = transpose_theta(smooth, *c.smooth_left)
    for f in transpose.failures():
        report.add("adjointable-sm", [cat.morphism_name(f)], transpose.witnesses.get(f, ""))
    report.merge(check_mor_axioms(closed_direct_part(c)), "cl-direct")
    if not report.passed:
        report.skip("C', T: component structures fail their axioms")
        return report

    check_pullbacks(b, report)
    for square in cartesian_squares(b):
        witness = [cat.morphism_name(x) for x in (square.q, square.h, square.z, square.p)]
        try:
            first, second = _core_hexagon(c, square)
            compare_terms(report, "C'", first, second, witness)
        except (PastingTypeError, NotIso) as exc:
            report.add("C'", witness, str(exc))

    try:
        skeleton = core_to_skeleton(c)
    except NotInvertible as exc:
        report.add("T", list(exc.witness), f"theta^cl not recoverable: {exc}")
        return report
    _check_triangles(skeleton, triangles(b), report)
    return report


def skeleton_agreement(s: SkeletonData, full: Optional[CheckReport] = None) -> Tuple[bool, bool]:
    """Verdicts of the exchange check and of the C/T check on the same skeleton."""
    ex = full if full is not None else check_skeleton(s)
    return ex.passed, check_skeleton_CT(s).passed
