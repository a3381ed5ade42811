"""
Fibered categories and morphisms between them.

A fibered category attaches a fiber to every base object and a functor to
every in-scope base morphism. With inverse variance f: T -> S gives
f^*: H(S) -> H(T); with direct variance it gives f_#/f_*: H(T) -> H(S).
"""
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Hashable, List, Tuple

from config.constants import Variance
from fibcat.exceptions import MissingData
from fibcat.models.base import BaseCat
from fibcat.models.category import Category, Functor, NatTrans


@dataclass(frozen=True, eq=False)
class FiberedCat:
    """Fibers, functors and connection isomorphisms over a base."""

    base: BaseCat
    fibers: Tuple[Category, ...]
    functors: Dict[int, Functor]
    conn: Dict[Tuple[int, int], NatTrans]
    variance: Variance = Variance.INVERSE
    scope: FrozenSet[int] = field(default_factory=frozenset)
    name: str = "H"
    # Evaluated connection chains and monoidality legs
    memo: Dict[Hashable, Any] = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self) -> None:
        if not self.scope:
            object.__setattr__(self, "scope", frozenset(self.functors))

    def fiber(self, S: int) -> Category:
        return self.fibers[S]

    def functor(self, f: int) -> Functor:
        try:
            return self.functors[f]
        except KeyError:
            raise MissingData(
                f"{self.name}: no functor for {self.base.cat.morphism_name(f)}"
            ) from None

    def conn_at(self, f: int, g: int) -> NatTrans:
        """Connection for the composable pair (f, g), composite g ∘ f."""
        try:
            return self.conn[(f, g)]
        except KeyError:
            cat = self.base.cat
            raise MissingData(
                f"{self.name}: no connection for "
                f"({cat.morphism_name(f)}, {cat.morphism_name(g)})"
            ) from None

    def in_scope(self, f: int) -> bool:
        return f in self.scope

    def morphisms(self) -> List[int]:
        return sorted(self.scope)

    def ends(self, f: int) -> Tuple[int, int]:
        """(object whose fiber F(f) starts at, object whose fiber it lands in)."""
        cat = self.base.cat
        if self.variance == Variance.INVERSE:
            return cat.cod(f), cat.dom(f)
        return cat.dom(f), cat.cod(f)

    def composable_pairs(self) -> List[Tuple[int, int]]:
        """In-scope (f, g) with cod f = dom g."""
        cat = self.base.cat
        scope = self.morphisms()
        return [(f, g) for f in scope for g in scope if cat.composable(g, f)]


@dataclass(frozen=True, eq=False)
class FibMorphism:
    """
    A morphism of fibered categories: functors R_S between fibers and
    transition isomorphisms θ_f: F2(f) ∘ R_in ⇒ R_out ∘ F1(f).
    """

    source: FiberedCat
    target: FiberedCat
    functors: Tuple[Functor, ...]
    theta: Dict[int, NatTrans]
    name: str = "R"

    def R(self, S: int) -> Functor:
        return self.functors[S]

    def theta_at(self, f: int) -> NatTrans:
        try:
            return self.theta[f]
        except KeyError:
            raise MissingData(
                f"{self.name}: no transition isomorphism along "
                f"{self.source.base.cat.morphism_name(f)}"
            ) from None

    @property
    def base(self) -> BaseCat:
        return self.source.base
