"""
Lazy product categories, pair functors and rebracketing.

Products are views over their factors: ids are mixed-radix codes and
composition is componentwise, so no table is ever stored.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Dict, List, Optional, Sequence, Tuple, Union

from config.constants import PAIR_SEPARATOR
from fibcat.models.category import Category, Functor, NatTrans

Tree = Union[int, Tuple["Tree", "Tree"]]


@dataclass(frozen=True, eq=False)
class ProductCat(Category):
    """The product of two finite categories."""

    left: Category
    right: Category
    name: str = ""

    def __post_init__(self) -> None:
        if not self.name:
            object.__setattr__(self, "name", f"({self.left.name}x{self.right.name})")

    @property
    def n_objects(self) -> int:
        return self.left.n_objects * self.right.n_objects

    @property
    def n_morphisms(self) -> int:
        return self.left.n_morphisms * self.right.n_morphisms

    def encode_object(self, a: int, b: int) -> int:
        return a * self.right.n_objects + b

    def decode_object(self, x: int) -> Tuple[int, int]:
        return divmod(x, self.right.n_objects)

    def encode_morphism(self, f: int, g: int) -> int:
        return f * self.right.n_morphisms + g

    def decode_morphism(self, f: int) -> Tuple[int, int]:
        return divmod(f, self.right.n_morphisms)

    def dom(self, f: int) -> int:
        a, b = self.decode_morphism(f)
        return self.encode_object(self.left.dom(a), self.right.dom(b))

    def cod(self, f: int) -> int:
        a, b = self.decode_morphism(f)
        return self.encode_object(self.left.cod(a), self.right.cod(b))

    def identity(self, x: int) -> int:
        a, b = self.decode_object(x)
        return self.encode_morphism(self.left.identity(a), self.right.identity(b))

    def compose(self, g: int, f: int) -> int:
        g1, g2 = self.decode_morphism(g)
        f1, f2 = self.decode_morphism(f)
        return self.encode_morphism(self.left.compose(g1, f1), self.right.compose(g2, f2))

    def inverse(self, f: int) -> Optional[int]:
        a, b = self.decode_morphism(f)
        ai, bi = self.left.inverse(a), self.right.inverse(b)
        if ai is None or bi is None:
            return None
        return self.encode_morphism(ai, bi)

    def object_name(self, x: int) -> str:
        a, b = self.decode_object(x)
        return f"{self.left.object_name(a)}{PAIR_SEPARATOR}{self.right.object_name(b)}"

    def morphism_name(self, f: int) -> str:
        a, b = self.decode_morphism(f)
        return f"{self.left.morphism_name(a)}{PAIR_SEPARATOR}{self.right.morphism_name(b)}"

    @cached_property
    def is_thin(self) -> bool:
        return self.left.is_thin and self.right.is_thin

    @cached_property
    def key(self) -> tuple:
        return ("product", self.left.key, self.right.key)


@lru_cache(maxsize=4096)
def product(left: Category, right: Category) -> ProductCat:
    """Shared product view of two categories."""
    return ProductCat(left, right)


@dataclass(frozen=True, eq=False)
class PairFunctor(Functor):
    """F x G acting componentwise on a product."""

    first: Functor
    second: Functor
    name: str = ""

    def __post_init__(self) -> None:
        if not self.name:
            object.__setattr__(self, "name", f"({self.first.name}x{self.second.name})")

    @cached_property
    def source(self) -> ProductCat:  # type: ignore[override]
        return product(self.first.source, self.second.source)

    @cached_property
    def target(self) -> ProductCat:  # type: ignore[override]
        return product(self.first.target, self.second.target)

    @cached_property
    def _objects(self) -> Tuple[int, ...]:
        width = self.target.right.n_objects
        second = self.second.object_table()
        return tuple(a * width + b for a in self.first.object_table() for b in second)

    @cached_property
    def _morphisms(self) -> Tuple[int, ...]:
        width = self.target.right.n_morphisms
        second = self.second.morphism_table()
        return tuple(f * width + g for f in self.first.morphism_table() for g in second)

    def obj(self, x: int) -> int:
        return self._objects[x]

    def mor(self, f: int) -> int:
        if "_morphisms" in self.__dict__:
            return self._morphisms[f]
        a, b = self.source.decode_morphism(f)
        return self.target.encode_morphism(self.first.mor(a), self.second.mor(b))

    def object_table(self) -> Tuple[int, ...]:
        return self._objects

    def morphism_table(self) -> Tuple[int, ...]:
        return self._morphisms


def pair_functor(first: Functor, second: Functor) -> PairFunctor:
    return PairFunctor(first, second)


def pair_trans(first: NatTrans, second: NatTrans, name: str = "") -> NatTrans:
    """The transformation first x second between pair functors."""
    source = PairFunctor(first.source, second.source)
    target = PairFunctor(first.target, second.target)
    domain, codomain = source.source, source.target
    components = []
    for x in domain.objects():
        a, b = domain.decode_object(x)
        components.append(codomain.encode_morphism(first.components[a], second.components[b]))
    return NatTrans(source, target, tuple(components), name or f"({first.name}x{second.name})")


def build_product(tree: Tree, leaves: Sequence[Category]) -> Category:
    """Nested product of leaf categories following a bracketing tree."""
    if isinstance(tree, int):
        return leaves[tree]
    return product(build_product(tree[0], leaves), build_product(tree[1], leaves))


def _decode(tree: Tree, category: Category, x: int, out: Dict[int, int], objects: bool) -> None:
    if isinstance(tree, int):
        out[tree] = x
        return
    assert isinstance(category, ProductCat)
    a, b = category.decode_object(x) if objects else category.decode_morphism(x)
    _decode(tree[0], category.left, a, out, objects)
    _decode(tree[1], category.right, b, out, objects)


def _encode(tree: Tree, category: Category, values: Dict[int, int], objects: bool) -> int:
    if isinstance(tree, int):
        return values[tree]
    assert isinstance(category, ProductCat)
    a = _encode(tree[0], category.left, values, objects)
    b = _encode(tree[1], category.right, values, objects)
    return category.encode_object(a, b) if objects else category.encode_morphism(a, b)


@dataclass(frozen=True, eq=False)
class RebracketFunctor(Functor):
    """Canonical isomorphism between two bracketings of the same leaves."""

    leaves: Tuple[Category, ...]
    source_tree: Tree
    target_tree: Tree
    name: str = "rebracket"

    @cached_property
    def source(self) -> Category:  # type: ignore[override]
        return build_product(self.source_tree, self.leaves)

    @cached_property
    def target(self) -> Category:  # type: ignore[override]
        return build_product(self.target_tree, self.leaves)

    def _rebracket(self, x: int, objects: bool) -> int:
        values: Dict[int, int] = {}
        _decode(self.source_tree, self.source, x, values, objects)
        return _encode(self.target_tree, self.target, values, objects)

    @cached_property
    def _objects(self) -> Tuple[int, ...]:
        return tuple(self._rebracket(x, True) for x in self.source.objects())

    def obj(self, x: int) -> int:
        return self._objects[x]

    def mor(self, f: int) -> int:
        return self._rebracket(f, False)

    def object_table(self) -> Tuple[int, ...]:
        return self._objects


def reassociate(a: Category, b: Category, c: Category) -> RebracketFunctor:
    """((A x B) x C) -> (A x (B x C))."""
    return RebracketFunctor((a, b, c), ((0, 1), 2), (0, (1, 2)), name="reassoc")


def swap(a: Category, b: Category) -> RebracketFunctor:
    """(A x B) -> (B x A)."""
    return RebracketFunctor((a, b), (0, 1), (1, 0), name="swap")


def split_name(name: str, parts: int) -> List[str]:
    """Split a joined pair/triple name into exactly `parts` pieces."""
    pieces = name.split(PAIR_SEPARATOR)
    if len(pieces) != parts:
        raise ValueError(f"expected {parts} components in {name!r}")
    return pieces


def join_names(*names: str) -> str:
    return PAIR_SEPARATOR.join(names)

