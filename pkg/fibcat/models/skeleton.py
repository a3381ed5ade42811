"""
Partial data of a morphism of fibered categories: skeleta (θ on smooth and
on closed morphisms) and cores (θ on smooth, θ-bar on closed).
"""
from dataclasses import dataclass
from typing import Dict, Tuple

from config.constants import Marked
from fibcat.models.adjoint import AdjointAssignment
from fibcat.models.category import Functor, NatTrans
from fibcat.models.fibered import FiberedCat, FibMorphism


@dataclass(frozen=True, eq=False)
class SkeletonData:
    """θ^sm on smooth morphisms and θ^cl on closed morphisms."""

    source: FiberedCat
    target: FiberedCat
    functors: Tuple[Functor, ...]
    theta_sm: Dict[int, NatTrans]
    theta_cl: Dict[int, NatTrans]
    name: str = "R"

    def part(self, marked: Marked) -> FibMorphism:
        """The smooth or closed part as a morphism over the full fibered categories."""
        family = self.theta_sm if marked == Marked.SMOOTH else self.theta_cl
        return FibMorphism(self.source, self.target, self.functors, family, f"{self.name}^{marked.value}")


@dataclass(frozen=True, eq=False)
class CoreData:
    """θ^sm with left adjoints on smooth morphisms, θ-bar^cl with right adjoints on closed ones."""

    source: FiberedCat
    target: FiberedCat
    functors: Tuple[Functor, ...]
    theta_sm: Dict[int, NatTrans]
    theta_cl_bar: Dict[int, NatTrans]
    smooth_left: Tuple[AdjointAssignment, AdjointAssignment]
    closed_right: Tuple[AdjointAssignment, AdjointAssignment]
    name: str = "R"

    def smooth_part(self) -> FibMorphism:
        return FibMorphism(self.source, self.target, self.functors, self.theta_sm, f"{self.name}^smooth")
