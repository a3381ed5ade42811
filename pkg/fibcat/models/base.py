"""
Base category data: marked subcategories, chosen products, pullbacks,
factorizations and the squares the exchange conditions range over.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Hashable, Optional, Tuple

from config.constants import Marked
from fibcat.exceptions import MissingData
from fibcat.models.category import FinCat


@dataclass(frozen=True)
class ProductData:
    """A chosen binary product with its projections."""

    obj: int
    first: int
    second: int


@dataclass(frozen=True)
class Pullback:
    """
    A pullback of the cospan (p, f).

    over_f is the leg parallel to f (into dom p); over_p is the leg
    parallel to p (into dom f).
    """

    apex: int
    over_f: int
    over_p: int


@dataclass(frozen=True, eq=False)
class BaseCat:
    """A base category with smooth and closed subcategories."""

    cat: FinCat
    smooth: FrozenSet[int]
    closed: FrozenSet[int]
    initial: Optional[int] = None
    products: Dict[Tuple[int, int], ProductData] = field(default_factory=dict)
    open_complements: Dict[int, int] = field(default_factory=dict)
    # Pullbacks, factorization categories and products of morphisms, computed on demand
    memo: Dict[Hashable, Any] = field(default_factory=dict, init=False, repr=False)

    @property
    def name(self) -> str:
        return self.cat.name

    def marked(self, which: Marked) -> FrozenSet[int]:
        if which == Marked.SMOOTH:
            return self.smooth
        if which == Marked.CLOSED:
            return self.closed
        return frozenset(self.cat.morphisms())

    def is_smooth(self, f: int) -> bool:
        return f in self.smooth

    def is_closed(self, f: int) -> bool:
        return f in self.closed

    @property
    def has_products(self) -> bool:
        return bool(self.products)

    def product(self, a: int, b: int) -> ProductData:
        """Chosen product of two objects."""
        try:
            return self.products[(a, b)]
        except KeyError:
            raise MissingData(
                f"{self.name}: no chosen product for "
                f"({self.cat.object_name(a)}, {self.cat.object_name(b)})"
            ) from None

    def product_object(self, *objects: int) -> int:
        """Left-nested product object of one or more objects."""
        result = objects[0]
        for x in objects[1:]:
            result = self.product(result, x).obj
        return result


@dataclass(frozen=True)
class FactObject:
    """A factorization f = p ∘ t with t closed and p smooth."""

    mid: int
    closed_part: int
    smooth_part: int


@dataclass(frozen=True)
class FactArrow:
    """A smooth q between factorizations (indices into the object list)."""

    source: int
    target: int
    q: int


@dataclass(frozen=True)
class FactCategory:
    """All factorizations of one base morphism and the arrows between them."""

    ambient: int
    objects: Tuple[FactObject, ...]
    arrows: Tuple[FactArrow, ...]

    def index(self, obj: FactObject) -> Optional[int]:
        try:
            return self.objects.index(obj)
        except ValueError:
            return None


@dataclass(frozen=True, order=True)
class MixedSquare:
    """
    A commutative square p ∘ h = z ∘ q.

        V --h--> P
        |        |
        q        p
        v        v
        Z --z--> S

    h, z closed; q, p smooth.
    """

    q: int
    h: int
    z: int
    p: int


@dataclass(frozen=True, order=True)
class Triangle:
    """A triangle q = p ∘ h with h closed and p, q smooth."""

    h: int
    p: int
    q: int
