"""
The finitely checkable part of the localic conditions.
"""
from itertools import product as cartesian

from config import get_logger
from fibcat.exceptions import FibcatError, NoPullback
from fibcat.models.localic import LocalicData
from fibcat.models.report import CheckReport
from fibcat.services.adjoint import beck_chevalley
from fibcat.services.base import pullback

logger = get_logger(__name__)


def _check_initial_fiber(l: LocalicData, report: CheckReport) -> None:
    b = l.host.base
    if b.initial is None:
        report.add("a", [], "no initial object declared")
        return
    fiber = l.host.fiber(b.initial)
    if fiber.n_objects != 1 or fiber.n_morphisms != 1:
        report.add(
            "a",
            [b.cat.object_name(b.initial)],
            f"{fiber.n_objects} objects, {fiber.n_morphisms} morphisms",
        )


def _check_base_change(l: LocalicData, report: CheckReport) -> None:
    b = l.host.base
    cat = b.cat
    name = cat.morphism_name
    for p in l.smooth_left.morphisms():
        for f in l.host.morphisms():
            if cat.cod(f) != cat.cod(p) or cat.is_identity(p) or cat.is_identity(f):
                continue
            try:
                pb = pullback(b, p, f)
            except NoPullback:
                report.note(f"b: no pullback of {name(p)} along {name(f)}")
                continue
            witness = [name(p), name(f)]
            if pb.over_p not in b.smooth:
                report.add("b", witness, f"{name(pb.over_p)} is not smooth")
                continue
            try:
                bc, ok = beck_chevalley(l.host, (pb.over_f, pb.over_p, f, p), l.smooth_left)
            except FibcatError as exc:
                report.add("b", witness, str(exc))
                continue
            if not ok:
                bad = next(x for x, c in enumerate(bc.components) if not bc.codomain.is_iso(c))
                report.add("b", [*witness, bc.domain.object_name(bad)], "base change map not invertible")


def _check_fully_faithful(l: LocalicData, report: CheckReport) -> None:
    cat = l.host.base.cat
    for z in l.closed_right.morphisms():
        push = l.closed_right.adjoint(z)
        source, target = push.source, push.target
        for x, y in cartesian(source.objects(), repeat=2):
            images = [push.mor(f) for f in source.hom(x, y)]
            expected = target.hom(push.obj(x), push.obj(y))
            if len(set(images)) != len(images) or sorted(set(images)) != sorted(expected):
                report.add(
                    "c-ff",
                    [cat.morphism_name(z), source.object_name(x), source.object_name(y)],
                    f"{len(images)} maps onto {len(set(images))} of {len(expected)}",
                )


def _check_conservative(l: LocalicData, report: CheckReport) -> None:
    b = l.host.base
    cat = b.cat
    for z in sorted(b.closed):
        u = b.open_complements.get(z)
        if u is None:
            report.add("d", [cat.morphism_name(z)], "no open complement")
            continue
        zs, us = l.host.functor(z), l.host.functor(u)
        fiber = l.host.fiber(cat.cod(z))
        for phi in fiber.morphisms():
            if fiber.is_iso(phi):
                continue
            if zs.target.is_iso(zs.mor(phi)) and us.target.is_iso(us.mor(phi)):
                report.add("d", [cat.morphism_name(z), cat.morphism_name(u), fiber.morphism_name(phi)])
                break


def check_localic_partial(l: LocalicData) -> CheckReport:
    """
    Check conditions (a), (b), (c-ff) and (d).

    (a) the fiber at the initial object is the terminal category; (b) every
    base change map of a pullback of a smooth morphism is invertible;
    (c-ff) each z_* is fully faithful on hom-sets; (d) (z^*, u^*) jointly
    reflect isomorphisms for each closed z with open complement u.
    """
    report = CheckReport(suite="localic")
    for law in ("a", "b", "c-ff", "d"):
        report.law(law)
    _check_initial_fiber(l, report)
    _check_base_change(l, report)
    _check_fully_faithful(l, report)
    _check_conservative(l, report)
    report.note("localic status means these finite conditions passed")
    logger.debug(f"Localic checks on {l.host.name}: {len(report.violations)} violations")
    return report
