"""
In-memory instances: everything one instance file describes, with names
densified to ids. The accessors assemble the data structures each check
suite consumes and return None when the instance lacks a family.
"""
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from fibcat.exceptions import MissingData
from fibcat.models.adjoint import AdjointAssignment
from fibcat.models.base import BaseCat
from fibcat.models.category import Functor, NatTrans
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
from fibcat.models.fibered import FiberedCat, FibMorphism
from fibcat.models.localic import LocalicData
from fibcat.models.skeleton import CoreData, SkeletonData

SIDES = ("source", "target")

Family = Dict[int, NatTrans]
PairFamily = Dict[Pair, NatTrans]


@dataclass(frozen=True, eq=False)
class SideAdjoints:
    """Left adjoints on smooth morphisms and right adjoints on closed ones, for one side."""

    smooth_left: Optional[AdjointAssignment] = None
    closed_right: Optional[AdjointAssignment] = None


@dataclass(frozen=True, eq=False)
class TensorFamilies:
    """Box functors with whichever m families and constraints a side carries."""

    box: Dict[Pair, Functor]
    m: Optional[PairFamily] = None
    m_sm: Optional[PairFamily] = None
    m_cl: Optional[PairFamily] = None
    m_cl_bar: Optional[PairFamily] = None
    assoc: Optional[AssocConstraint] = None
    comm: Optional[CommConstraint] = None


@dataclass(frozen=True, eq=False)
class MorphismFamilies:
    functors: Tuple[Functor, ...]
    theta: Optional[Family] = None
    theta_sm: Optional[Family] = None
    theta_cl: Optional[Family] = None
    theta_cl_bar: Optional[Family] = None
    name: str = "R"


@dataclass(frozen=True, eq=False)
class RhoFamilies:
    rho: Optional[PairFamily] = None
    rho_sm: Optional[PairFamily] = None
    rho_cl: Optional[PairFamily] = None


@dataclass(frozen=True, eq=False)
class Oracle:
    """Predicted θ of the morphism and m of the source tensor structure."""

    theta: Optional[Family] = None
    m: Optional[PairFamily] = None


@dataclass(frozen=True)
class MutationRecord:
    """Where a mutated instance differs from its parent."""

    family: str
    key: Tuple[str, ...]
    obj: str
    original: str
    replacement: str
    covered: bool


@dataclass(frozen=True, eq=False)
class Instance:
    """A base, one or two fibered categories and any optional structure over them."""

    name: str
    base: BaseCat
    source: FiberedCat
    target: Optional[FiberedCat] = None
    morphism: Optional[MorphismFamilies] = None
    adjoints: Dict[str, SideAdjoints] = field(default_factory=dict)
    tensors: Dict[str, TensorFamilies] = field(default_factory=dict)
    rho: Optional[RhoFamilies] = None
    oracle: Optional[Oracle] = None
    mutation: Optional[MutationRecord] = None
    seed: Optional[int] = None

    def side(self, which: str) -> FiberedCat:
        if which == "source":
            return self.source
        if which == "target":
            return self.target or self.source
        raise MissingData(f"{self.name}: unknown side {which!r}")

    def sides(self) -> Tuple[str, ...]:
        """Sides present in the instance."""
        return SIDES if self.target is not None else SIDES[:1]

    def side_adjoints(self, which: str) -> SideAdjoints:
        return self.adjoints.get(which, SideAdjoints())

    def _both(self, attribute: str) -> Optional[Tuple[AdjointAssignment, AdjointAssignment]]:
        first = getattr(self.side_adjoints("source"), attribute)
        second = getattr(self.side_adjoints("target" if self.target is not None else "source"), attribute)
        if first is None or second is None:
            return None
        return first, second

    def smooth_left_pair(self) -> Optional[Tuple[AdjointAssignment, AdjointAssignment]]:
        return self._both("smooth_left")

    def closed_right_pair(self) -> Optional[Tuple[AdjointAssignment, AdjointAssignment]]:
        return self._both("closed_right")

    # Morphism-level structures

    def fib_morphism(self) -> Optional[FibMorphism]:
        m = self.morphism
        if m is None or m.theta is None:
            return None
        return FibMorphism(self.source, self.side("target"), m.functors, m.theta, m.name)

    def skeleton(self) -> Optional[SkeletonData]:
        m = self.morphism
        if m is None or m.theta_sm is None or m.theta_cl is None:
            return None
        return SkeletonData(self.source, self.side("target"), m.functors, m.theta_sm, m.theta_cl, m.name)

    def core(self) -> Optional[CoreData]:
        m = self.morphism
        smooth_left, closed_right = self.smooth_left_pair(), self.closed_right_pair()
        if m is None or m.theta_sm is None or m.theta_cl_bar is None:
            return None
        if smooth_left is None or closed_right is None:
            return None
        return CoreData(
            self.source,
            self.side("target"),
            m.functors,
            m.theta_sm,
            m.theta_cl_bar,
            smooth_left,
            closed_right,
            m.name,
        )

    # Tensor structures

    def ets(self, which: str) -> Optional[ETSData]:
        t = self.tensors.get(which)
        if t is None or t.m is None:
            return None
        return ETSData(self.side(which), t.box, t.m, f"box[{which}]")

    def ets_skeleton(self, which: str) -> Optional[ETSkeletonData]:
        t = self.tensors.get(which)
        if t is None or t.m_sm is None or t.m_cl is None:
            return None
        return ETSkeletonData(self.side(which), t.box, t.m_sm, t.m_cl, f"box[{which}]")

    def ets_core(self, which: str) -> Optional[ETCoreData]:
        t = self.tensors.get(which)
        adjoints = self.side_adjoints(which)
        if t is None or t.m_sm is None or t.m_cl_bar is None:
            return None
        if adjoints.smooth_left is None or adjoints.closed_right is None:
            return None
        return ETCoreData(
            self.side(which),
            t.box,
            t.m_sm,
            t.m_cl_bar,
            adjoints.smooth_left,
            adjoints.closed_right,
            f"box[{which}]",
        )

    def constraints(self, which: str) -> Tuple[Optional[AssocConstraint], Optional[CommConstraint]]:
        t = self.tensors.get(which)
        if t is None:
            return None, None
        return t.assoc, t.comm

    def _tensor_sides(self) -> Tuple[str, str]:
        return "source", ("target" if self.target is not None else "source")

    def mor_ets(self) -> Optional[MorETS]:
        first, second = self._tensor_sides()
        morphism, e1, e2 = self.fib_morphism(), self.ets(first), self.ets(second)
        if self.rho is None or self.rho.rho is None or morphism is None or e1 is None or e2 is None:
            return None
        return MorETS(morphism, e1, e2, self.rho.rho)

    def mor_ets_skeleton(self) -> Optional[MorETSkeletonData]:
        first, second = self._tensor_sides()
        skeleton, s1, s2 = self.skeleton(), self.ets_skeleton(first), self.ets_skeleton(second)
        r = self.rho
        if r is None or r.rho_sm is None or r.rho_cl is None:
            return None
        if skeleton is None or s1 is None or s2 is None:
            return None
        return MorETSkeletonData(skeleton, s1, s2, r.rho_sm, r.rho_cl)

    def mor_etc(self) -> Optional[MorETCoreData]:
        first, second = self._tensor_sides()
        core, c1, c2 = self.core(), self.ets_core(first), self.ets_core(second)
        r = self.rho
        if r is None or r.rho_sm is None or r.rho_cl is None:
            return None
        if core is None or c1 is None or c2 is None:
            return None
        return MorETCoreData(core, c1, c2, r.rho_sm, r.rho_cl)

    def localic(self, which: str) -> Optional[LocalicData]:
        adjoints = self.side_adjoints(which)
        if adjoints.smooth_left is None or adjoints.closed_right is None:
            return None
        return LocalicData(self.side(which), adjoints.smooth_left, adjoints.closed_right)
