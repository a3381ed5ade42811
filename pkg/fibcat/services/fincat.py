"""
Validation of finite categories, functors and transformations, and
evaluation of pasting terms by table lookup.
"""
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from config import get_logger
from fibcat.exceptions import BoundaryMismatch, DanglingId, NotIso, PastingTypeError, SourceInvalid
from fibcat.models.category import (
    NO_COMPOSITE,
    Category,
    FinCat,
    FinFunctor,
    Functor,
    NatTrans,
    PastingTerm,
    same_functor,
)
from fibcat.models.report import CheckReport

logger = get_logger(__name__)


def _entry(c: Category, g: int, f: int) -> int:
    if isinstance(c, FinCat):
        return c.entry(g, f)
    return c.compose(g, f) if c.composable(g, f) else NO_COMPOSITE


def validate_category(c: Category) -> CheckReport:
    """
    Check the category laws on a composition table.

    Args:
        c: Category to validate

    Returns:
        Report with laws identity-typing, composability, totality, typing,
        unit and associativity

    Raises:
        DanglingId: If a table entry or identity is out of range
    """
    report = CheckReport(suite=f"category:{c.name}")
    n_obj, n_mor = c.n_objects, c.n_morphisms
    for f in c.morphisms():
        if not (0 <= c.dom(f) < n_obj and 0 <= c.cod(f) < n_obj):
            raise DanglingId("object", f"boundary of morphism #{f}", c.name)
    for x in c.objects():
        i = c.identity(x)
        if not 0 <= i < n_mor:
            raise DanglingId("morphism", f"identity #{i}", c.name)
    for g in c.morphisms():
        for f in c.morphisms():
            gf = _entry(c, g, f)
            if gf != NO_COMPOSITE and not 0 <= gf < n_mor:
                raise DanglingId("morphism", f"#{gf}", c.name)

    for law in ("identity-typing", "composability", "totality", "typing", "unit", "associativity"):
        report.law(law)

    name = c.morphism_name
    for x in c.objects():
        i = c.identity(x)
        if c.dom(i) != x or c.cod(i) != x:
            report.add("identity-typing", [c.object_name(x), name(i)])

    for g in c.morphisms():
        for f in c.morphisms():
            gf = _entry(c, g, f)
            composable = c.cod(f) == c.dom(g)
            if gf != NO_COMPOSITE and not composable:
                report.add("composability", [name(g), name(f)])
            elif gf == NO_COMPOSITE and composable:
                report.add("totality", [name(g), name(f)])
            elif gf != NO_COMPOSITE and (c.dom(gf) != c.dom(f) or c.cod(gf) != c.cod(g)):
                report.add("typing", [name(g), name(f)], f"composite is {c.describe(gf)}")

    for f in c.morphisms():
        left = _entry(c, c.identity(c.cod(f)), f)
        right = _entry(c, f, c.identity(c.dom(f)))
        if left != f or right != f:
            report.add("unit", [name(f)])

    if report.passed:
        for h in c.morphisms():
            for g in _into(c, c.dom(h)):
                hg = c.compose(h, g)
                for f in _into(c, c.dom(g)):
                    if c.compose(h, c.compose(g, f)) != c.compose(hg, f):
                        report.add("associativity", [name(h), name(g), name(f)])
    else:
        report.skip("associativity: table is not well-typed")

    logger.debug(f"Category {c.name}: {len(report.violations)} violations")
    return report


def _into(c: Category, x: int) -> List[int]:
    return [f for f in c.morphisms() if c.cod(f) == x]


def validate_functor(functor: Functor) -> CheckReport:
    """
    Check that a functor preserves boundaries, identities and composites.

    Raises:
        SourceInvalid: If its source or target category is not valid
    """
    source, target = functor.source, functor.target
    for side, category in (("source", source), ("target", target)):
        if not validate_category(category).passed:
            raise SourceInvalid(f"{functor.name or 'functor'}: {side} {category.name} is not valid")

    report = CheckReport(suite=f"functor:{functor.name}")
    for law in ("objects", "typing", "identities", "composition"):
        report.law(law)

    for x in source.objects():
        if not 0 <= functor.obj(x) < target.n_objects:
            report.add("objects", [source.object_name(x)])
    if not report.passed:
        return report

    for f in source.morphisms():
        image = functor.mor(f)
        if not 0 <= image < target.n_morphisms:
            report.add("typing", [source.morphism_name(f)], "image out of range")
            continue
        if target.dom(image) != functor.obj(source.dom(f)) or target.cod(image) != functor.obj(
            source.cod(f)
        ):
            report.add("typing", [source.morphism_name(f)], f"image is {target.describe(image)}")
    if not report.passed:
        return report

    for x in source.objects():
        if functor.mor(source.identity(x)) != target.identity(functor.obj(x)):
            report.add("identities", [source.object_name(x)])

    for g in source.morphisms():
        for f in _into(source, source.dom(g)):
            lhs = functor.mor(source.compose(g, f))
            rhs = target.compose(functor.mor(g), functor.mor(f))
            if lhs != rhs:
                report.add(
                    "composition",
                    [source.morphism_name(g), source.morphism_name(f)],
                    f"F(g∘f)={target.morphism_name(lhs)} but F(g)∘F(f)={target.morphism_name(rhs)}",
                )
    return report


def validate_nat_trans(t: NatTrans) -> CheckReport:
    """
    Check every naturality square of a transformation.

    Raises:
        BoundaryMismatch: If the two functors do not share source and target
    """
    F, G = t.source, t.target
    if F.source != G.source or F.target != G.target:
        raise BoundaryMismatch(f"{t.name}: functors do not share source and target")
    report = CheckReport(suite=f"transformation:{t.name}")
    report.law("naturality")
    domain, codomain = t.domain, t.codomain
    for f in domain.morphisms():
        a, b = domain.dom(f), domain.cod(f)
        lhs = codomain.compose(G.mor(f), t[a])
        rhs = codomain.compose(t[b], F.mor(f))
        if lhs != rhs:
            report.add(
                "naturality",
                [domain.morphism_name(f)],
                f"G(f)∘t={codomain.morphism_name(lhs)} but t∘F(f)={codomain.morphism_name(rhs)}",
            )
    return report


def invert_nat_iso(t: NatTrans) -> NatTrans:
    """
    Componentwise inverse of a natural isomorphism.

    Raises:
        NotIso: Naming the first component without an inverse
    """
    return t.inverse()


def evaluate_pasting(term: PastingTerm) -> NatTrans:
    """
    Evaluate a pasting term to a transformation between its boundary functors.

    Each step must start at the functor where the previous one ended, on
    objects and on morphisms; components are then composed in order.

    Raises:
        PastingTypeError: At the first step that does not chain
        NotIso: If an inverted step has a non-invertible component
    """
    current = term.source
    for index, step in enumerate(term.steps):
        source = step.source_functor()
        if not same_functor(current, source):
            raise PastingTypeError(
                f"{term.label or 'pasting'}: step {index} ({step.label or step.trans.name}) "
                f"does not start where the previous step ended",
                step=index,
            )
        current = step.target_functor()
    if not same_functor(current, term.target):
        raise PastingTypeError(
            f"{term.label or 'pasting'}: last step does not end at the declared target",
            step=len(term.steps),
        )

    codomain = term.target.target
    components = []
    for x in term.domain.objects():
        c = codomain.identity(term.source.obj(x))
        for step in term.steps:
            c = codomain.compose(step.component(x), c)
        components.append(c)
    return NatTrans(term.source, term.target, tuple(components), term.label)


def trace_pasting(term: PastingTerm, x: int) -> List[str]:
    """Morphism names of each step's component at one object, for replay by hand."""
    codomain = term.target.target
    trace = []
    for step in term.steps:
        try:
            trace.append(f"{step.label or step.trans.name}={codomain.morphism_name(step.component(x))}")
        except NotIso:
            trace.append(f"{step.label or step.trans.name}=<not invertible>")
    return trace


def compare_terms(
    report: CheckReport,
    law: str,
    first: PastingTerm,
    second: PastingTerm,
    witness: Sequence[str],
) -> bool:
    """
    Record whether two pasting paths evaluate to the same transformation.

    A mismatch is reported at the lowest differing object together with the
    traces of both paths there.
    """
    report.law(law)
    try:
        lhs = evaluate_pasting(first)
        rhs = evaluate_pasting(second)
    except NotIso as exc:
        report.add(law, list(witness), f"not invertible: {exc}")
        return False
    return compare_trans(report, law, lhs, rhs, witness, first, second)


def compare_trans(
    report: CheckReport,
    law: str,
    lhs: NatTrans,
    rhs: NatTrans,
    witness: Sequence[str],
    first: Optional[PastingTerm] = None,
    second: Optional[PastingTerm] = None,
    terms: Optional[Callable[[], Tuple[PastingTerm, PastingTerm]]] = None,
) -> bool:
    """
    Record whether two transformations have equal components.

    The traces of a mismatch come from first and second, or from terms(),
    which is only called when the components differ.
    """
    report.law(law)
    for x, (a, b) in enumerate(zip(lhs.components, rhs.components)):
        if a != b:
            names = lhs.codomain.morphism_name
            trace: Tuple[str, ...] = ()
            if (first is None or second is None) and terms is not None:
                first, second = terms()
            if first is not None and second is not None:
                trace = tuple(trace_pasting(first, x)) + ("vs",) + tuple(trace_pasting(second, x))
            report.add(
                law,
                [*witness, lhs.domain.object_name(x)],
                f"{names(a)} != {names(b)}",
                trace,
            )
            return False
    return True


def check_iso(report: CheckReport, law: str, t: NatTrans, witness: Sequence[str]) -> bool:
    """Record whether every component of t is invertible."""
    report.law(law)
    for x, c in enumerate(t.components):
        if not t.codomain.is_iso(c):
            report.add(law, [*witness, t.domain.object_name(x)], f"{t.codomain.morphism_name(c)} has no inverse")
            return False
    return True


def conjugate_functor(functor: Functor, isos: Sequence[int], name: str = "") -> Tuple[FinFunctor, NatTrans]:
    """
    Transport a functor along per-object automorphisms.

    Args:
        functor: F: A -> B
        isos: For each object x of A an automorphism u_x of F(x)
        name: Name of the transported functor

    Returns:
        (F', u) with F'(f) = u_cod ∘ F(f) ∘ u_dom^-1 and u: F ⇒ F'
    """
    source, target = functor.source, functor.target
    inverses: Dict[int, int] = {}
    for x in source.objects():
        u = isos[x]
        inv = target.inverse(u)
        if inv is None or target.dom(u) != functor.obj(x) or target.cod(u) != functor.obj(x):
            raise NotIso(
                f"{name or functor.name}: {target.morphism_name(u)} is not an automorphism of "
                f"{target.object_name(functor.obj(x))}",
                witness=source.object_name(x),
            )
        inverses[x] = inv
    mor_map = tuple(
        target.compose(isos[source.cod(f)], target.compose(functor.mor(f), inverses[source.dom(f)]))
        for f in source.morphisms()
    )
    conjugated = FinFunctor(
        source,
        target,
        tuple(functor.obj(x) for x in source.objects()),
        mor_map,
        name or f"{functor.name}'",
    )
    return conjugated, NatTrans(functor, conjugated, tuple(isos), name=f"u[{conjugated.name}]")
