"""
Suite orchestration: which checks each suite runs on an instance, run in a
worker pool and collected into one deterministic run report.
"""
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple, TypeVar

from config import get_logger, settings
from config.constants import DEFAULT_SUITES, SUITE_ORDER, Suite
from fibcat.exceptions import Disconnected, ExtensionFailure, MissingComplement, NotInvertible
from fibcat.models.category import Functor, NatTrans
from fibcat.models.ets import ETSData, MorETSkeletonData
from fibcat.models.fibered import FibMorphism
from fibcat.models.instance import Instance
from fibcat.models.report import CheckReport, RunReport
from fibcat.models.skeleton import CoreData
from fibcat.services.adjoint import (
    check_assignment,
    check_opposite_fibered,
    check_theta_transpose,
    transpose_theta,
)
from fibcat.services.base import (
    check_hyp_core,
    check_hyp_skel,
    check_products,
    fact_category,
    fact_connectivity,
)
from fibcat.services.ets import (
    check_constraints,
    check_etc,
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
    restrict_ets,
    transport_constraints,
    transport_rho,
    transpose_m,
)
from fibcat.services.extension import full_morphism, full_mor_ets, full_ets, tensor_sides
from fibcat.services.fibered import check_coherence, check_fib_axioms, check_mor_axioms
from fibcat.services.fincat import validate_category, validate_functor
from fibcat.services.localic import check_localic_partial
from fibcat.services.skeleton import (
    check_core,
    check_skeleton,
    core_to_skeleton,
    extend_skeleton,
    restrict_to_skeleton,
    skeleton_agreement,
    skeleton_to_core,
)
from fibcat.utils.decorators import log_execution, suite_guard

logger = get_logger(__name__)

K = TypeVar("K")


def resolve_suites(name: str) -> Tuple[Suite, ...]:
    """
    Suites selected by a --check argument.

    Raises:
        ValueError: If the name is not a suite
    """
    suite = Suite(name)
    return DEFAULT_SUITES if suite == Suite.ALL else (suite,)


def compare_family(
    report: CheckReport,
    law: str,
    found: Mapping[K, NatTrans],
    expected: Mapping[K, NatTrans],
    witness: Callable[[K], List[str]],
) -> None:
    """Record every key whose component table differs (or is missing) under law."""
    report.law(law)
    for key in sorted(set(found) | set(expected)):  # type: ignore[type-var]
        if key not in found or key not in expected:
            report.add(law, witness(key), "present on one side only")
        elif found[key] != expected[key]:
            report.add(law, witness(key))


def _prefix(i: Instance, which: str) -> Optional[str]:
    return which if len(i.sides()) > 1 else None


class SuiteRunner:
    """Runs check suites on instances."""

    def __init__(self, threads: Optional[int] = None):
        """
        Initialize the runner.

        Args:
            threads: Worker cap; defaults to the configured FIBCAT_THREADS
        """
        self.threads = threads or settings.threads
        self._suites: Dict[Suite, Callable[[Instance], CheckReport]] = {
            Suite.CATEGORY: self.category,
            Suite.BASE: self.base,
            Suite.FIBERED: self.fibered,
            Suite.COHERENCE: self.coherence,
            Suite.MORPHISM: self.morphism,
            Suite.SKELETON: self.skeleton,
            Suite.CORE: self.core,
            Suite.ETS: self.ets,
            Suite.ETS_SKELETON: self.ets_skeleton,
            Suite.ETC: self.etc,
            Suite.LOCALIC: self.localic,
            Suite.ADJOINT: self.adjoint,
        }

    def _timed(self, suite: Suite, instance: Instance) -> Tuple[CheckReport, float]:
        start = time.perf_counter()
        report = self._suites[suite](instance)
        return report.sort(), time.perf_counter() - start

    def run(self, instance: Instance, suites: Iterable[Suite] = DEFAULT_SUITES) -> RunReport:
        """
        Run the requested suites and collect their reports in suite order.

        Args:
            instance: Loaded instance
            suites: Suites to run; Suite.ALL expands to the default set

        Returns:
            Run report; engine errors inside a suite become failing reports
        """
        wanted = set(suites)
        if Suite.ALL in wanted:
            wanted = (wanted - {Suite.ALL}) | set(DEFAULT_SUITES)
        ordered = [s for s in SUITE_ORDER if s in wanted]
        logger.info(f"Running {len(ordered)} suites on {instance.name} with {self.threads} workers")

        run = RunReport(instance=instance.name, seed=instance.seed)
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            futures = [(s, pool.submit(self._timed, s, instance)) for s in ordered]
            for suite, future in futures:
                report, elapsed = future.result()
                run.reports.append(report)
                run.timings[suite.value] = elapsed
        failing = [r.suite for r in run.reports if not r.passed]
        if failing:
            logger.warning(f"{instance.name}: failing suites {', '.join(failing)}")
        return run

    # Structure

    @suite_guard(Suite.CATEGORY.value)
    @log_execution
    def category(self, i: Instance) -> CheckReport:
        """Base and fiber tables, then every functor the instance declares."""
        report = CheckReport(suite=Suite.CATEGORY.value)
        categories = [i.base.cat] + [c for w in i.sides() for c in i.side(w).fibers]
        seen: Set[int] = set()
        for c in categories:
            if id(c) in seen:
                continue
            seen.add(id(c))
            report.merge(validate_category(c), c.name)
        if not report.passed:
            report.skip("functors: categories fail their axioms")
            return report

        functors: List[Functor] = []
        for which in i.sides():
            h = i.side(which)
            functors.extend(h.functor(f) for f in h.morphisms())
            adjoints = i.side_adjoints(which)
            for assign in (adjoints.smooth_left, adjoints.closed_right):
                if assign is not None:
                    for entry in assign.entries.values():
                        functors.extend((entry.left, entry.right))
        for tensors in i.tensors.values():
            functors.extend(tensors.box[key] for key in sorted(tensors.box))
        if i.morphism is not None:
            functors.extend(i.morphism.functors)
        seen.clear()
        for functor in functors:
            if id(functor) in seen:
                continue
            seen.add(id(functor))
            report.merge(validate_functor(functor), f"functor:{functor.name}")
        return report

    @suite_guard(Suite.BASE.value)
    @log_execution
    def base(self, i: Instance) -> CheckReport:
        """Factorization hypotheses, complements, products and every Fact(f)."""
        b = i.base
        cat = b.cat
        report = CheckReport(suite=Suite.BASE.value)
        report.merge(check_hyp_skel(b))
        if b.initial is not None or b.open_complements:
            try:
                report.merge(check_hyp_core(b))
            except MissingComplement as exc:
                report.add("complement", [], str(exc))
        else:
            report.skip("core hypotheses: no initial object or complements declared")
        if b.products:
            report.merge(check_products(b))
        else:
            report.skip("products: none declared")
        report.law("connected")
        for f in cat.morphisms():
            try:
                report.merge(fact_connectivity(fact_category(b, f), b))
            except Disconnected as exc:
                report.add("connected", [cat.morphism_name(f)], str(exc))
        return report

    @suite_guard(Suite.FIBERED.value)
    @log_execution
    def fibered(self, i: Instance) -> CheckReport:
        report = CheckReport(suite=Suite.FIBERED.value)
        for which in i.sides():
            report.merge(check_fib_axioms(i.side(which)), _prefix(i, which))
        return report

    @suite_guard(Suite.COHERENCE.value)
    @log_execution
    def coherence(self, i: Instance) -> CheckReport:
        report = CheckReport(suite=Suite.COHERENCE.value)
        for which in i.sides():
            report.merge(check_coherence(i.side(which)), _prefix(i, which))
        return report

    # Morphisms

    def _morphism_or_failure(self, i: Instance, report: CheckReport) -> Optional[FibMorphism]:
        try:
            return full_morphism(i)
        except ExtensionFailure as exc:
            report.add("extend", [i.name], str(exc))
            report.merge(exc.report, "extend")
        except NotInvertible as exc:
            report.add("extend", list(exc.witness), str(exc))
        return None

    def _theta_oracle(self, i: Instance, m: FibMorphism, report: CheckReport) -> None:
        if i.oracle is None or i.oracle.theta is None:
            return
        name = i.base.cat.morphism_name
        compare_family(report, "oracle", m.theta, i.oracle.theta, lambda f: [m.name, name(f)])

    @suite_guard(Suite.MORPHISM.value)
    @log_execution
    def morphism(self, i: Instance) -> CheckReport:
        """The morphism axioms on declared or extended θ, and agreement with the oracle."""
        report = CheckReport(suite=Suite.MORPHISM.value)
        if i.morphism is None:
            report.skip("no morphism declared")
            return report
        m = self._morphism_or_failure(i, report)
        if m is None:
            if report.passed:
                report.skip("no theta, skeleton or core declared")
            return report
        report.merge(check_mor_axioms(m))
        self._theta_oracle(i, m, report)
        return report

    @suite_guard(Suite.SKELETON.value)
    @log_execution
    def skeleton(self, i: Instance) -> CheckReport:
        """The exchange condition, its C/T split and the extension bijection."""
        report = CheckReport(suite=Suite.SKELETON.value)
        s, core = i.skeleton(), i.core()
        if s is None and core is not None:
            try:
                s = core_to_skeleton(core)
            except NotInvertible as exc:
                report.add("core-recover", list(exc.witness), str(exc))
                return report
        if s is None:
            report.skip("no skeleton or core declared")
            return report

        checked = check_skeleton(s)
        report.merge(checked)
        ex, ct = skeleton_agreement(s, checked)
        report.law("ex-agreement")
        if ex != ct:
            report.add("ex-agreement", [s.name], f"exchange {ex}, C and T {ct}")

        name = s.source.base.cat.morphism_name
        report.law("extends")
        try:
            extended = extend_skeleton(s)
        except ExtensionFailure as exc:
            if checked.passed:
                report.add("extends", [s.name], str(exc))
                report.merge(exc.report, "extend")
            else:
                report.note(f"extension of {s.name} fails as its checks do: {exc}")
            return report

        back = restrict_to_skeleton(extended)
        compare_family(report, "restrict-extend", back.theta_sm, s.theta_sm, lambda f: ["sm", name(f)])
        compare_family(report, "restrict-extend", back.theta_cl, s.theta_cl, lambda f: ["cl", name(f)])
        self._theta_oracle(i, extended, report)

        full = i.fib_morphism()
        if full is not None and check_mor_axioms(full).passed:
            again = extend_skeleton(restrict_to_skeleton(full))
            compare_family(report, "extend-restrict", again.theta, full.theta, lambda f: [name(f)])

        closed, smooth = i.closed_right_pair(), i.smooth_left_pair()
        if closed is not None and smooth is not None:
            try:
                roundtrip = core_to_skeleton(skeleton_to_core(s, closed, smooth))
            except NotInvertible as exc:
                report.note(f"core roundtrip of {s.name} unavailable: {exc}")
            else:
                compare_family(report, "core-roundtrip", roundtrip.theta_cl, s.theta_cl, lambda f: [name(f)])
        return report

    def _core_or_none(self, i: Instance, report: CheckReport) -> Optional[CoreData]:
        declared = i.core()
        if declared is not None:
            return declared
        s, closed, smooth = i.skeleton(), i.closed_right_pair(), i.smooth_left_pair()
        if s is None or closed is None or smooth is None:
            report.skip("no core, and no skeleton with both adjoint families")
            return None
        try:
            return skeleton_to_core(s, closed, smooth)
        except NotInvertible as exc:
            report.skip(f"closed part not right-adjointable: {exc}")
            return None

    @suite_guard(Suite.CORE.value)
    @log_execution
    def core(self, i: Instance) -> CheckReport:
        """The core conditions, their agreement with the skeleton verdict and the roundtrip."""
        report = CheckReport(suite=Suite.CORE.value)
        c = self._core_or_none(i, report)
        if c is None:
            return report
        checked = check_core(c)
        report.merge(checked)

        report.law("core-agreement")
        try:
            direct = check_skeleton(core_to_skeleton(c)).passed
        except NotInvertible:
            direct = False
        direct = direct and transpose_theta(c.smooth_part(), *c.smooth_left).adjointable
        if direct != checked.passed:
            report.add("core-agreement", [c.name], f"core {checked.passed}, skeleton {direct}")

        name = c.source.base.cat.morphism_name
        try:
            back = skeleton_to_core(core_to_skeleton(c), c.closed_right, c.smooth_left)
        except NotInvertible as exc:
            report.note(f"skeleton roundtrip of {c.name} unavailable: {exc}")
        else:
            compare_family(report, "core-roundtrip", back.theta_cl_bar, c.theta_cl_bar, lambda f: [name(f)])
        return report

    # Tensor structures

    def _m_oracle(self, i: Instance, which: str, e: ETSData, report: CheckReport) -> None:
        if which != "source" or i.oracle is None or i.oracle.m is None:
            return
        name = i.base.cat.morphism_name
        compare_family(report, "oracle", e.m, i.oracle.m, lambda k: [e.name, name(k[0]), name(k[1])])

    @suite_guard(Suite.ETS.value)
    @log_execution
    def ets(self, i: Instance) -> CheckReport:
        """Monoidality of declared or extended m, the constraints and ρ."""
        report = CheckReport(suite=Suite.ETS.value)
        sides = tensor_sides(i)
        if not sides:
            report.skip("no tensor structure declared")
            return report
        for which in sides:
            side = CheckReport(suite=Suite.ETS.value)
            try:
                e = full_ets(i, which)
            except ExtensionFailure as exc:
                side.add("extend", [which], str(exc))
                side.merge(exc.report, "extend")
                e = None
            except NotInvertible as exc:
                side.add("extend", list(exc.witness), str(exc))
                e = None
            if e is None:
                if side.passed:
                    side.skip(f"{which}: no m, tensor skeleton or tensor core")
            else:
                side.merge(check_mets(e))
                side.merge(check_constraints(e, *i.constraints(which)))
                self._m_oracle(i, which, e, side)
            report.merge(side, _prefix(i, which))

        if i.rho is not None:
            try:
                r = full_mor_ets(i)
            except (ExtensionFailure, NotInvertible) as exc:
                report.skip(f"rho: parts do not extend: {exc}")
            else:
                if r is None:
                    report.skip("rho: morphism or tensor structures missing")
                else:
                    report.merge(check_mor_ets(r), "rho")
        return report

    @suite_guard(Suite.ETS_SKELETON.value)
    @log_execution
    def ets_skeleton(self, i: Instance) -> CheckReport:
        """Tensor skeleta: exchange, C/T split, constraints and the extension bijection."""
        report = CheckReport(suite=Suite.ETS_SKELETON.value)
        sides = [w for w in tensor_sides(i) if i.ets_skeleton(w) is not None or i.ets_core(w) is not None]
        if not sides:
            report.skip("no tensor skeleton or tensor core declared")
            return report
        name = i.base.cat.morphism_name

        def pair(k: Tuple[int, int]) -> List[str]:
            return [name(k[0]), name(k[1])]

        for which in sides:
            side = CheckReport(suite=Suite.ETS_SKELETON.value)
            s = i.ets_skeleton(which)
            if s is None:
                core = i.ets_core(which)
                assert core is not None
                try:
                    s = ets_core_to_skeleton(core)
                except NotInvertible as exc:
                    side.add("core-recover", list(exc.witness), str(exc))
                    report.merge(side, _prefix(i, which))
                    continue

            checked = check_ets_skeleton(s)
            side.merge(checked)
            ex, ct = ets_agreement(s, checked)
            side.law("ex-agreement")
            if ex != ct:
                side.add("ex-agreement", [s.name], f"exchange {ex}, C and T {ct}")
            side.merge(check_skeleton_constraints(s, *i.constraints(which)))

            side.law("extends")
            try:
                extended = extend_ets_skeleton(s)
            except ExtensionFailure as exc:
                if checked.passed:
                    side.add("extends", [s.name], str(exc))
                    side.merge(exc.report, "extend")
                else:
                    side.note(f"extension of {s.name} fails as its checks do: {exc}")
                report.merge(side, _prefix(i, which))
                continue
            back = restrict_ets(extended)
            compare_family(side, "restrict-extend", back.m_sm, s.m_sm, lambda k: ["sm"] + pair(k))
            compare_family(side, "restrict-extend", back.m_cl, s.m_cl, lambda k: ["cl"] + pair(k))
            self._m_oracle(i, which, extended, side)

            full = i.ets(which)
            if full is not None and check_mets(full).passed:
                again = extend_ets_skeleton(restrict_ets(full))
                compare_family(side, "extend-restrict", again.m, full.m, pair)

            adjoints = i.side_adjoints(which)
            if adjoints.smooth_left is not None and adjoints.closed_right is not None:
                try:
                    core = ets_skeleton_to_core(s, adjoints.closed_right, adjoints.smooth_left)
                    roundtrip = ets_core_to_skeleton(core)
                except NotInvertible as exc:
                    side.note(f"core roundtrip of {s.name} unavailable: {exc}")
                else:
                    compare_family(side, "core-roundtrip", roundtrip.m_cl, s.m_cl, pair)
            report.merge(side, _prefix(i, which))

        r = i.mor_ets_skeleton()
        if r is not None:
            report.merge(check_mor_ets_skeleton(r), "rho")
        return report

    @suite_guard(Suite.ETC.value)
    @log_execution
    def etc(self, i: Instance) -> CheckReport:
        """Tensor cores, their agreement with the skeleton verdict, and ρ on cores."""
        report = CheckReport(suite=Suite.ETC.value)
        name = i.base.cat.morphism_name
        found = False
        for which in tensor_sides(i):
            c = i.ets_core(which)
            if c is None:
                s, adjoints = i.ets_skeleton(which), i.side_adjoints(which)
                if s is None or adjoints.smooth_left is None or adjoints.closed_right is None:
                    continue
                try:
                    c = ets_skeleton_to_core(s, adjoints.closed_right, adjoints.smooth_left)
                except NotInvertible as exc:
                    report.skip(f"{which}: m^cl not right-adjointable: {exc}")
                    continue
            found = True
            side = CheckReport(suite=Suite.ETC.value)
            checked = check_etc(c)
            side.merge(checked)

            side.law("etc-agreement")
            try:
                direct = check_ets_skeleton(ets_core_to_skeleton(c)).passed
            except NotInvertible:
                direct = False
            direct = direct and transpose_m(c.smooth_part(), c.smooth_left).adjointable
            if direct != checked.passed:
                side.add("etc-agreement", [c.name], f"core {checked.passed}, skeleton {direct}")

            try:
                back = ets_skeleton_to_core(ets_core_to_skeleton(c), c.closed_right, c.smooth_left)
            except NotInvertible as exc:
                side.note(f"skeleton roundtrip of {c.name} unavailable: {exc}")
            else:
                compare_family(
                    side, "etc-roundtrip", back.m_cl_bar, c.m_cl_bar, lambda k: [name(k[0]), name(k[1])]
                )
            report.merge(side, _prefix(i, which))
        if not found:
            report.skip("no tensor core, and no tensor skeleton with both adjoint families")
            return report

        r = i.mor_etc()
        if r is not None:
            checked_rho = check_mor_etc(r)
            report.merge(checked_rho, "rho")
            report.law("rho-agreement")
            try:
                via_skeleton = check_mor_ets_skeleton(
                    MorETSkeletonData(
                        core_to_skeleton(r.core),
                        ets_core_to_skeleton(r.source_ets),
                        ets_core_to_skeleton(r.target_ets),
                        r.rho_sm,
                        r.rho_cl,
                        r.name,
                    )
                ).passed
            except NotInvertible:
                via_skeleton = False
            if via_skeleton != checked_rho.passed:
                report.add("rho-agreement", [r.name], f"core {checked_rho.passed}, skeleton {via_skeleton}")
        return report

    @suite_guard(Suite.LOCALIC.value)
    @log_execution
    def localic(self, i: Instance) -> CheckReport:
        report = CheckReport(suite=Suite.LOCALIC.value)
        for which in i.sides():
            data = i.localic(which)
            if data is None:
                report.skip(f"{which}: needs both adjoint families")
                continue
            report.merge(check_localic_partial(data), _prefix(i, which))
        return report

    # Adjunction calculus

    @suite_guard(Suite.ADJOINT.value)
    @log_execution
    def adjoint(self, i: Instance) -> CheckReport:
        """
        Adjunctions, the derived opposite-variance structures, and the
        transposition of θ, m, the constraints and ρ.

        Right-adjointability is required only where the instance declares the
        transposed family; otherwise its verdict is reported as a note.
        """
        report = CheckReport(suite=Suite.ADJOINT.value)
        declared = False
        for which in i.sides():
            h = i.side(which)
            adjoints = i.side_adjoints(which)
            for assign in (adjoints.smooth_left, adjoints.closed_right):
                if assign is None:
                    continue
                declared = True
                side = assign.side.value
                sub = CheckReport(suite=Suite.ADJOINT.value)
                sub.merge(check_assignment(assign))
                if sub.passed:
                    sub.merge(check_opposite_fibered(h, assign), f"opposite-{side}")
                report.merge(sub, _prefix(i, which))
        if not declared:
            report.skip("no adjoints declared")
            return report
        if not report.passed:
            report.skip("transposition: adjunctions fail their axioms")
            return report

        m = self._morphism_or_failure(i, report) if i.morphism is not None else None
        smooth, closed = i.smooth_left_pair(), i.closed_right_pair()
        if m is not None:
            if smooth is not None:
                report.merge(check_theta_transpose(m, *smooth))
            if closed is not None:
                if i.morphism is not None and i.morphism.theta_cl_bar is not None:
                    report.merge(check_theta_transpose(m, *closed))
                else:
                    verdict = transpose_theta(m, *closed).adjointable
                    report.note(f"theta right-adjointable along closed morphisms: {verdict}")

        for which in tensor_sides(i):
            self._adjoint_tensor(i, which, report)

        r = full_mor_ets(i) if m is not None else None
        if r is not None:
            pairs = [smooth] if smooth is not None else []
            if closed is not None and i.morphism is not None and i.morphism.theta_cl_bar is not None:
                pairs.append(closed)
            report.merge(transport_rho(r, pairs))
        return report

    def _adjoint_tensor(self, i: Instance, which: str, report: CheckReport) -> None:
        try:
            e = full_ets(i, which)
        except (ExtensionFailure, NotInvertible) as exc:
            report.skip(f"{which}: m does not extend: {exc}")
            return
        if e is None:
            return
        sub = CheckReport(suite=Suite.ADJOINT.value)
        a, c = i.constraints(which)
        adjoints = i.side_adjoints(which)
        if adjoints.smooth_left is not None:
            sub.merge(check_m_transpose(e, adjoints.smooth_left))
            sub.merge(check_projection_formula(e, adjoints.smooth_left))
            sub.merge(transport_constraints(e, a, c, adjoints.smooth_left))
        if adjoints.closed_right is not None:
            if i.tensors[which].m_cl_bar is not None:
                sub.merge(check_m_transpose(e, adjoints.closed_right))
                sub.merge(transport_constraints(e, a, c, adjoints.closed_right))
            else:
                verdict = transpose_m(e, adjoints.closed_right).adjointable
                sub.note(f"{which}: m right-adjointable along closed morphisms: {verdict}")
        report.merge(sub, _prefix(i, which))


def check_instance(instance: Instance, suites: Sequence[Suite] = DEFAULT_SUITES) -> RunReport:
    """Run suites with the configured worker cap."""
    return SuiteRunner().run(instance, suites)
