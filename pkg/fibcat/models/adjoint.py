"""
Adjunction data attached to the marked morphisms of a fibered category.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List

from config.constants import Marked, Side
from fibcat.exceptions import MissingData
from fibcat.models.category import Category, Functor, IdentityFunctor, NatTrans, compose_functors
from fibcat.models.fibered import FiberedCat


@dataclass(frozen=True, eq=False)
class Adjunction:
    """left ⊣ right with unit id ⇒ right∘left and counit left∘right ⇒ id."""

    left: Functor
    right: Functor
    unit: NatTrans
    counit: NatTrans
    name: str = ""

    @classmethod
    def identity(cls, category: Category) -> "Adjunction":
        functor = IdentityFunctor(category)
        unit = NatTrans.identity(functor, "eta")
        return cls(functor, functor, unit, unit.named("eps"), name=f"id[{category.name}]")

    @classmethod
    def from_components(
        cls,
        left: Functor,
        right: Functor,
        unit: tuple,
        counit: tuple,
        name: str = "",
    ) -> "Adjunction":
        """Build the unit and counit transformations from raw components."""
        eta = NatTrans(
            IdentityFunctor(left.source), compose_functors(right, left), tuple(unit), f"eta[{name}]"
        )
        eps = NatTrans(
            compose_functors(left, right), IdentityFunctor(left.target), tuple(counit), f"eps[{name}]"
        )
        return cls(left, right, eta, eps, name)


@dataclass(frozen=True, eq=False)
class AdjointAssignment:
    """
    One adjoint per marked morphism of a fibered category.

    With side LEFT the entry for f is f_# ⊣ f^*; with side RIGHT it is
    f^* ⊣ f_*. Identity morphisms carry the identity adjunction unless given.
    """

    host: FiberedCat
    side: Side
    marked: Marked
    entries: Dict[int, Adjunction] = field(default_factory=dict)
    name: str = ""

    def entry(self, f: int) -> Adjunction:
        if f in self.entries:
            return self.entries[f]
        cat = self.host.base.cat
        if cat.is_identity(f):
            return Adjunction.identity(self.host.fiber(cat.dom(f)))
        raise MissingData(
            f"{self.name or self.host.name}: no {self.side.value} adjoint for "
            f"{cat.morphism_name(f)}"
        )

    def adjoint(self, f: int) -> Functor:
        entry = self.entry(f)
        return entry.left if self.side == Side.LEFT else entry.right

    def unit(self, f: int) -> NatTrans:
        return self.entry(f).unit

    def counit(self, f: int) -> NatTrans:
        return self.entry(f).counit

    def morphisms(self) -> List[int]:
        marked = self.host.base.marked(self.marked)
        return sorted(f for f in self.host.scope if f in marked)

    def covers(self, f: int) -> bool:
        return f in self.entries or self.host.base.cat.is_identity(f)


@dataclass
class Transpose:
    """A transposed family with a per-key invertibility verdict."""

    side: Side
    family: Dict[Any, NatTrans] = field(default_factory=dict)
    verdicts: Dict[Any, bool] = field(default_factory=dict)
    witnesses: Dict[Any, str] = field(default_factory=dict)

    @property
    def adjointable(self) -> bool:
        return all(self.verdicts.values())

    def failures(self) -> List[Any]:
        return sorted(k for k, ok in self.verdicts.items() if not ok)
