"""
Finite categories, functors, natural transformations and pasting terms.

Objects and morphisms are dense integers; names are kept only for reports
and files. Equality of categories, functors and transformations is
on-the-nose table equality.
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from fibcat.exceptions import (
    BoundaryMismatch,
    CompositionUndefined,
    DanglingId,
    NotIso,
    PastingTypeError,
)

NO_COMPOSITE = -1


class Category(ABC):
    """A finite category with densely numbered objects and morphisms."""

    name: str

    @property
    @abstractmethod
    def n_objects(self) -> int:
        """Number of objects."""

    @property
    @abstractmethod
    def n_morphisms(self) -> int:
        """Number of morphisms."""

    @abstractmethod
    def dom(self, f: int) -> int:
        """Domain of a morphism."""

    @abstractmethod
    def cod(self, f: int) -> int:
        """Codomain of a morphism."""

    @abstractmethod
    def identity(self, x: int) -> int:
        """Identity morphism of an object."""

    @abstractmethod
    def compose(self, g: int, f: int) -> int:
        """The composite g after f."""

    @abstractmethod
    def object_name(self, x: int) -> str:
        """User-facing object name."""

    @abstractmethod
    def morphism_name(self, f: int) -> str:
        """User-facing morphism name."""

    @property
    @abstractmethod
    def key(self) -> tuple:
        """Structural key used for equality."""

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Category):
            return NotImplemented
        if self._hash != other._hash:
            return False
        return self.key == other.key

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash(self.key)

    def objects(self) -> range:
        """All object ids."""
        return range(self.n_objects)

    def morphisms(self) -> range:
        """All morphism ids."""
        return range(self.n_morphisms)

    @cached_property
    def _homs(self) -> Dict[Tuple[int, int], Tuple[int, ...]]:
        homs: Dict[Tuple[int, int], List[int]] = {}
        for f in self.morphisms():
            homs.setdefault((self.dom(f), self.cod(f)), []).append(f)
        return {k: tuple(v) for k, v in homs.items()}

    def hom(self, a: int, b: int) -> Tuple[int, ...]:
        """Morphisms from a to b in id order."""
        return self._homs.get((a, b), ())

    @cached_property
    def _inverses(self) -> Tuple[int, ...]:
        inverses = []
        for f in self.morphisms():
            a, b = self.dom(f), self.cod(f)
            found = NO_COMPOSITE
            for g in self.hom(b, a):
                if self.compose(g, f) == self.identity(a) and self.compose(f, g) == self.identity(b):
                    found = g
                    break
            inverses.append(found)
        return tuple(inverses)

    def inverse(self, f: int) -> Optional[int]:
        """Two-sided inverse of f, if any."""
        g = self._inverses[f]
        return None if g == NO_COMPOSITE else g

    @cached_property
    def is_thin(self) -> bool:
        """At most one morphism between any two objects."""
        return all(len(fs) <= 1 for fs in self._homs.values())

    def is_iso(self, f: int) -> bool:
        return self.inverse(f) is not None

    def is_identity(self, f: int) -> bool:
        return self.identity(self.dom(f)) == f

    def composable(self, g: int, f: int) -> bool:
        return self.cod(f) == self.dom(g)

    @cached_property
    def _object_index(self) -> Dict[str, int]:
        return {self.object_name(x): x for x in self.objects()}

    @cached_property
    def _morphism_index(self) -> Dict[str, int]:
        return {self.morphism_name(f): f for f in self.morphisms()}

    def object_index(self, name: str) -> int:
        """Object id for a name."""
        try:
            return self._object_index[name]
        except KeyError:
            raise DanglingId("object", name, self.name) from None

    def morphism_index(self, name: str) -> int:
        """Morphism id for a name."""
        try:
            return self._morphism_index[name]
        except KeyError:
            raise DanglingId("morphism", name, self.name) from None

    def describe(self, f: int) -> str:
        """Morphism name with its boundary, for witnesses."""
        return (
            f"{self.morphism_name(f)}: "
            f"{self.object_name(self.dom(f))}->{self.object_name(self.cod(f))}"
        )


@dataclass(frozen=True, eq=False)
class FinCat(Category):
    """A finite category stored as a dense composition table."""

    name: str
    object_names: Tuple[str, ...]
    morphism_names: Tuple[str, ...]
    doms: Tuple[int, ...]
    cods: Tuple[int, ...]
    ids: Tuple[int, ...]
    table: Tuple[Tuple[int, ...], ...]

    @property
    def n_objects(self) -> int:
        return len(self.object_names)

    @property
    def n_morphisms(self) -> int:
        return len(self.morphism_names)

    def dom(self, f: int) -> int:
        return self.doms[f]

    def cod(self, f: int) -> int:
        return self.cods[f]

    def identity(self, x: int) -> int:
        return self.ids[x]

    def compose(self, g: int, f: int) -> int:
        gf = self.table[g][f]
        if gf == NO_COMPOSITE:
            raise CompositionUndefined(
                f"{self.name}: no composite for "
                f"({self.morphism_names[g]}, {self.morphism_names[f]})"
            )
        return gf

    def entry(self, g: int, f: int) -> int:
        """Raw table entry; NO_COMPOSITE where undefined."""
        return self.table[g][f]

    def object_name(self, x: int) -> str:
        return self.object_names[x]

    def morphism_name(self, f: int) -> str:
        return self.morphism_names[f]

    @cached_property
    def key(self) -> tuple:
        return (
            self.object_names,
            self.morphism_names,
            self.doms,
            self.cods,
            self.ids,
            self.table,
        )

    @classmethod
    def build(
        cls,
        name: str,
        objects: Sequence[str],
        morphisms: Sequence[Tuple[str, str, str]],
        compositions: Iterable[Tuple[str, str, str]] = (),
        identities: Optional[Mapping[str, str]] = None,
        fill_units: bool = True,
    ) -> FinCat:
        """
        Build a category from names.

        Args:
            name: Category name
            objects: Object names
            morphisms: (name, dom, cod) triples
            compositions: (g, f, g∘f) triples
            identities: Object name -> identity morphism name; defaults to "id_<object>"
            fill_units: Add the unit-law entries that are not listed

        Returns:
            The category (not validated)
        """
        obj_index = {o: i for i, o in enumerate(objects)}
        if len(obj_index) != len(objects):
            raise ValueError(f"{name}: duplicate object names")
        mor_index = {m[0]: i for i, m in enumerate(morphisms)}
        if len(mor_index) != len(morphisms):
            raise ValueError(f"{name}: duplicate morphism names")

        def obj(o: str) -> int:
            if o not in obj_index:
                raise DanglingId("object", o, name)
            return obj_index[o]

        def mor(m: str) -> int:
            if m not in mor_index:
                raise DanglingId("morphism", m, name)
            return mor_index[m]

        doms = tuple(obj(d) for _, d, _ in morphisms)
        cods = tuple(obj(c) for _, _, c in morphisms)
        ids = []
        for o in objects:
            id_name = (identities or {}).get(o, f"id_{o}")
            ids.append(mor(id_name))

        n = len(morphisms)
        table = [[NO_COMPOSITE] * n for _ in range(n)]
        for g, f, gf in compositions:
            table[mor(g)][mor(f)] = mor(gf)
        if fill_units:
            for f in range(n):
                left, right = ids[cods[f]], ids[doms[f]]
                if table[left][f] == NO_COMPOSITE:
                    table[left][f] = f
                if table[f][right] == NO_COMPOSITE:
                    table[f][right] = f
        return cls(
            name=name,
            object_names=tuple(objects),
            morphism_names=tuple(m[0] for m in morphisms),
            doms=doms,
            cods=cods,
            ids=tuple(ids),
            table=tuple(tuple(row) for row in table),
        )

    @classmethod
    def one_object(
        cls,
        name: str,
        elements: Sequence[str],
        multiply: Callable[[str, str], str],
        object_name: str = "*",
    ) -> FinCat:
        """One-object category of a monoid; elements[0] is the unit."""
        index = {e: i for i, e in enumerate(elements)}
        table = tuple(
            tuple(index[multiply(g, f)] for f in elements) for g in elements
        )
        return cls(
            name=name,
            object_names=(object_name,),
            morphism_names=tuple(elements),
            doms=(0,) * len(elements),
            cods=(0,) * len(elements),
            ids=(0,),
            table=table,
        )

    @classmethod
    def thin(
        cls, name: str, elements: Sequence[str], leq: Callable[[str, str], bool]
    ) -> FinCat:
        """Category of a finite preorder; the arrow a->b is named "a<=b"."""
        arrows = [(a, b) for a in elements for b in elements if leq(a, b)]
        index = {pair: i for i, pair in enumerate(arrows)}
        position = {e: i for i, e in enumerate(elements)}
        n = len(arrows)
        table = [[NO_COMPOSITE] * n for _ in range(n)]
        for (b, c), g in index.items():
            for (a, b2), f in index.items():
                if b2 == b:
                    table[g][f] = index[(a, c)]
        return cls(
            name=name,
            object_names=tuple(elements),
            morphism_names=tuple(f"{a}<={b}" for a, b in arrows),
            doms=tuple(position[a] for a, _ in arrows),
            cods=tuple(position[b] for _, b in arrows),
            ids=tuple(index[(e, e)] for e in elements),
            table=tuple(tuple(row) for row in table),
        )

    @classmethod
    def terminal(cls, name: str = "1") -> FinCat:
        """The category with one object and one morphism."""
        return cls(
            name=name,
            object_names=("*",),
            morphism_names=("id",),
            doms=(0,),
            cods=(0,),
            ids=(0,),
            table=((0,),),
        )

    @classmethod
    def discrete(cls, name: str, objects: Sequence[str]) -> FinCat:
        """Category with only identity morphisms."""
        n = len(objects)
        table = [[NO_COMPOSITE] * n for _ in range(n)]
        for i in range(n):
            table[i][i] = i
        return cls(
            name=name,
            object_names=tuple(objects),
            morphism_names=tuple(f"id_{o}" for o in objects),
            doms=tuple(range(n)),
            cods=tuple(range(n)),
            ids=tuple(range(n)),
            table=tuple(tuple(row) for row in table),
        )

    def with_entry(self, g: int, f: int, value: int) -> FinCat:
        """Copy with one composition entry replaced."""
        table = [list(row) for row in self.table]
        table[g][f] = value
        return FinCat(
            name=self.name,
            object_names=self.object_names,
            morphism_names=self.morphism_names,
            doms=self.doms,
            cods=self.cods,
            ids=self.ids,
            table=tuple(tuple(row) for row in table),
        )


class Functor(ABC):
    """A functor between finite categories."""

    source: Category
    target: Category
    name: str

    @abstractmethod
    def obj(self, x: int) -> int:
        """Image of an object."""

    @abstractmethod
    def mor(self, f: int) -> int:
        """Image of a morphism."""

    def after(self, *inner: Functor) -> Functor:
        """Composite self ∘ inner[0] ∘ inner[1] ∘ ..."""
        return compose_functors(self, *inner)

    def object_table(self) -> Tuple[int, ...]:
        """Object map indexed by source object."""
        return tuple(self.obj(x) for x in self.source.objects())

    def morphism_table(self) -> Tuple[int, ...]:
        """Morphism map indexed by source morphism."""
        return tuple(self.mor(f) for f in self.source.morphisms())

    def tabulate(self) -> FinFunctor:
        """Materialised copy of this functor."""
        return FinFunctor(
            source=self.source,
            target=self.target,
            obj_map=self.object_table(),
            mor_map=self.morphism_table(),
            name=self.name,
        )

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Functor):
            return NotImplemented
        return same_functor(self, other)

    def __hash__(self) -> int:
        return hash((self.source, self.target))


@dataclass(frozen=True, eq=False)
class FinFunctor(Functor):
    """A functor stored as object and morphism tables."""

    source: Category
    target: Category
    obj_map: Tuple[int, ...]
    mor_map: Tuple[int, ...]
    name: str = ""

    def obj(self, x: int) -> int:
        return self.obj_map[x]

    def mor(self, f: int) -> int:
        return self.mor_map[f]

    def object_table(self) -> Tuple[int, ...]:
        return self.obj_map

    def morphism_table(self) -> Tuple[int, ...]:
        return self.mor_map

    def tabulate(self) -> FinFunctor:
        return self

    @classmethod
    def identity(cls, category: Category) -> FinFunctor:
        return cls(
            source=category,
            target=category,
            obj_map=tuple(category.objects()),
            mor_map=tuple(category.morphisms()),
            name=f"id[{category.name}]",
        )

    @classmethod
    def constant(cls, source: Category, target: Category, x: int, name: str = "") -> FinFunctor:
        """Functor sending everything to x and its identity."""
        return cls(
            source=source,
            target=target,
            obj_map=(x,) * source.n_objects,
            mor_map=(target.identity(x),) * source.n_morphisms,
            name=name or f"const[{target.object_name(x)}]",
        )

    @classmethod
    def from_names(
        cls,
        source: Category,
        target: Category,
        objects: Mapping[str, str],
        morphisms: Mapping[str, str],
        name: str = "",
    ) -> FinFunctor:
        """Build from name maps; identities may be omitted from morphisms."""
        obj_map = tuple(
            target.object_index(objects[source.object_name(x)])
            if source.object_name(x) in objects
            else _missing("object", source.object_name(x), name)
            for x in source.objects()
        )
        mor_map = []
        for f in source.morphisms():
            f_name = source.morphism_name(f)
            if f_name in morphisms:
                mor_map.append(target.morphism_index(morphisms[f_name]))
            elif source.is_identity(f):
                mor_map.append(target.identity(obj_map[source.dom(f)]))
            else:
                _missing("morphism", f_name, name)
        return cls(source, target, obj_map, tuple(mor_map), name)


def _missing(kind: str, item: str, where: str) -> int:
    raise DanglingId(kind, item, where or "functor")


@dataclass(frozen=True, eq=False)
class IdentityFunctor(Functor):
    """Identity functor, evaluated lazily."""

    category: Category
    name: str = "id"

    @property
    def source(self) -> Category:  # type: ignore[override]
        return self.category

    @property
    def target(self) -> Category:  # type: ignore[override]
        return self.category

    def obj(self, x: int) -> int:
        return x

    def mor(self, f: int) -> int:
        return f

    def object_table(self) -> Tuple[int, ...]:
        return tuple(self.category.objects())

    def morphism_table(self) -> Tuple[int, ...]:
        return tuple(self.category.morphisms())


@dataclass(frozen=True, eq=False)
class ComposedFunctor(Functor):
    """Lazy composite; factors are listed outermost first."""

    factors: Tuple[Functor, ...]
    name: str = ""

    @property
    def source(self) -> Category:  # type: ignore[override]
        return self.factors[-1].source

    @property
    def target(self) -> Category:  # type: ignore[override]
        return self.factors[0].target

    @cached_property
    def _objects(self) -> Tuple[int, ...]:
        table = self.factors[-1].object_table()
        for functor in reversed(self.factors[:-1]):
            outer = functor.object_table()
            table = tuple(outer[x] for x in table)
        return table

    @cached_property
    def _morphisms(self) -> Tuple[int, ...]:
        table = self.factors[-1].morphism_table()
        for functor in reversed(self.factors[:-1]):
            outer = functor.morphism_table()
            table = tuple(outer[f] for f in table)
        return table

    def obj(self, x: int) -> int:
        return self._objects[x]

    def mor(self, f: int) -> int:
        # Single morphisms stay lazy; full tables are only built on request
        if "_morphisms" in self.__dict__:
            return self._morphisms[f]
        for functor in reversed(self.factors):
            f = functor.mor(f)
        return f

    def object_table(self) -> Tuple[int, ...]:
        return self._objects

    def morphism_table(self) -> Tuple[int, ...]:
        return self._morphisms


def compose_functors(*functors: Functor) -> Functor:
    """
    Compose functors given outermost first.

    Args:
        functors: F1, F2, ..., Fk meaning F1 ∘ F2 ∘ ... ∘ Fk

    Returns:
        The composite functor
    """
    if not functors:
        raise BoundaryMismatch("cannot compose an empty list of functors")
    flat: List[Functor] = []
    for functor in functors:
        if isinstance(functor, ComposedFunctor):
            flat.extend(functor.factors)
        else:
            flat.append(functor)
    for outer, inner in zip(flat, flat[1:]):
        if outer.source != inner.target:
            raise BoundaryMismatch(
                f"cannot compose {outer.name or 'functor'} after {inner.name or 'functor'}: "
                f"{outer.source.name} != {inner.target.name}"
            )
    kept = [f for f in flat if not isinstance(f, IdentityFunctor)]
    if not kept:
        return flat[0]
    if len(kept) == 1:
        return kept[0]
    return ComposedFunctor(tuple(kept), name="∘".join(f.name for f in kept if f.name))


def objects_agree(first: Functor, second: Functor) -> bool:
    """Same categories and same object map."""
    if first is second:
        return True
    if first.source != second.source or first.target != second.target:
        return False
    return first.object_table() == second.object_table()


def same_functor(first: Functor, second: Functor) -> bool:
    """On-the-nose equality of functors."""
    if not objects_agree(first, second):
        return False
    if first is second or first.target.is_thin:
        # Hom sets of a thin target have at most one element
        return True
    return first.morphism_table() == second.morphism_table()


@dataclass(frozen=True, eq=False)
class NatTrans:
    """A natural transformation given by its components."""

    source: Functor
    target: Functor
    components: Tuple[int, ...]
    name: str = ""

    def __post_init__(self) -> None:
        if self.source.source != self.target.source or self.source.target != self.target.target:
            raise BoundaryMismatch(
                f"{self.name or 'transformation'}: functors do not share source and target"
            )
        domain, codomain = self.domain, self.codomain
        if len(self.components) != domain.n_objects:
            raise BoundaryMismatch(
                f"{self.name or 'transformation'}: expected {domain.n_objects} components, "
                f"got {len(self.components)}"
            )
        for x, c in enumerate(self.components):
            if not 0 <= c < codomain.n_morphisms:
                raise BoundaryMismatch(f"{self.name}: component {c} out of range")
            if codomain.dom(c) != self.source.obj(x) or codomain.cod(c) != self.target.obj(x):
                raise BoundaryMismatch(
                    f"{self.name or 'transformation'}: component at "
                    f"{domain.object_name(x)} is {codomain.describe(c)}, expected "
                    f"{codomain.object_name(self.source.obj(x))}->"
                    f"{codomain.object_name(self.target.obj(x))}"
                )

    @property
    def domain(self) -> Category:
        return self.source.source

    @property
    def codomain(self) -> Category:
        return self.source.target

    def __getitem__(self, x: int) -> int:
        return self.components[x]

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, NatTrans):
            return NotImplemented
        return (
            self.components == other.components
            and self.domain == other.domain
            and self.codomain == other.codomain
        )

    def __hash__(self) -> int:
        return hash(self.components)

    @classmethod
    def identity(cls, functor: Functor, name: str = "") -> NatTrans:
        category = functor.target
        return cls(
            source=functor,
            target=functor,
            components=tuple(category.identity(functor.obj(x)) for x in functor.source.objects()),
            name=name or f"id[{functor.name}]",
        )

    def is_identity(self) -> bool:
        return all(self.codomain.is_identity(c) for c in self.components)

    def is_iso(self) -> bool:
        return all(self.codomain.is_iso(c) for c in self.components)

    def then(self, other: NatTrans) -> NatTrans:
        """Vertical composite: self first, then other."""
        if not objects_agree(self.target, other.source):
            raise BoundaryMismatch(f"cannot compose {self.name} with {other.name}")
        codomain = self.codomain
        return NatTrans(
            source=self.source,
            target=other.target,
            components=tuple(
                codomain.compose(b, a) for a, b in zip(self.components, other.components)
            ),
            name=f"{other.name}·{self.name}",
        )

    def whisker(
        self, left: Sequence[Functor] = (), right: Sequence[Functor] = ()
    ) -> NatTrans:
        """The transformation L ∘ self ∘ R; both sequences outermost first."""
        return PastingStep(self, tuple(left), tuple(right)).evaluate()

    def inverse(self) -> NatTrans:
        """Componentwise inverse."""
        codomain = self.codomain
        inverse = []
        for x, c in enumerate(self.components):
            ci = codomain.inverse(c)
            if ci is None:
                raise NotIso(
                    f"{self.name or 'transformation'}: component at "
                    f"{self.domain.object_name(x)} ({codomain.morphism_name(c)}) is not invertible",
                    witness=self.domain.object_name(x),
                )
            inverse.append(ci)
        return NatTrans(self.target, self.source, tuple(inverse), name=f"{self.name}^-1")

    def replace(self, x: int, component: int) -> NatTrans:
        """Copy with one component replaced."""
        components = list(self.components)
        components[x] = component
        return NatTrans(self.source, self.target, tuple(components), self.name)

    def named(self, name: str) -> NatTrans:
        return NatTrans(self.source, self.target, self.components, name)

    def component_names(self) -> Dict[str, str]:
        """Object name -> component name."""
        return {
            self.domain.object_name(x): self.codomain.morphism_name(c)
            for x, c in enumerate(self.components)
        }


@dataclass(frozen=True, eq=False)
class PastingStep:
    """One whiskered, possibly inverted, transformation in a pasting term."""

    trans: NatTrans
    left: Tuple[Functor, ...] = ()
    right: Tuple[Functor, ...] = ()
    inverted: bool = False
    label: str = ""

    @property
    def domain(self) -> Category:
        return self.right[-1].source if self.right else self.trans.domain

    @property
    def codomain(self) -> Category:
        return self.left[0].target if self.left else self.trans.codomain

    @cached_property
    def _boundary(self) -> Tuple[Functor, Functor]:
        source, target = self.trans.source, self.trans.target
        if self.inverted:
            source, target = target, source
        return (
            compose_functors(*self.left, source, *self.right),
            compose_functors(*self.left, target, *self.right),
        )

    def source_functor(self) -> Functor:
        return self._boundary[0]

    def target_functor(self) -> Functor:
        return self._boundary[1]

    def component(self, x: int) -> int:
        """Component of the whiskered transformation at an object of the domain."""
        for functor in reversed(self.right):
            x = functor.obj(x)
        c = self.trans.components[x]
        if self.inverted:
            ci = self.trans.codomain.inverse(c)
            if ci is None:
                raise NotIso(
                    f"{self.label or self.trans.name}: component "
                    f"{self.trans.codomain.morphism_name(c)} is not invertible",
                    witness=self.trans.domain.object_name(x),
                )
            c = ci
        for functor in reversed(self.left):
            c = functor.mor(c)
        return c

    def evaluate(self) -> NatTrans:
        return NatTrans(
            source=self.source_functor(),
            target=self.target_functor(),
            components=tuple(self.component(x) for x in self.domain.objects()),
            name=self.label or self.trans.name,
        )


@dataclass(frozen=True, eq=False)
class PastingTerm:
    """A formal vertical composite of whiskered transformations."""

    source: Functor
    target: Functor
    steps: Tuple[PastingStep, ...] = field(default_factory=tuple)
    label: str = ""

    @classmethod
    def identity(cls, functor: Functor, label: str = "") -> PastingTerm:
        return cls(functor, functor, (), label)

    @classmethod
    def chain(cls, steps: Sequence[PastingStep], label: str = "") -> PastingTerm:
        """Term whose boundary is read off its first and last steps."""
        if not steps:
            raise PastingTypeError("an empty chain has no boundary", step=0)
        return cls(steps[0].source_functor(), steps[-1].target_functor(), tuple(steps), label)

    @property
    def domain(self) -> Category:
        return self.source.source

    def __len__(self) -> int:
        return len(self.steps)

    def __add__(self, other: PastingTerm) -> PastingTerm:
        if not same_functor(self.target, other.source):
            raise PastingTypeError(
                f"cannot append {other.label or 'term'} to {self.label or 'term'}",
                step=len(self.steps),
            )
        return PastingTerm(self.source, other.target, self.steps + other.steps, self.label)

    def whiskered(
        self, left: Sequence[Functor] = (), right: Sequence[Functor] = ()
    ) -> PastingTerm:
        """Whisker every step (and the boundary) by the same functors."""
        left, right = tuple(left), tuple(right)
        steps = tuple(
            PastingStep(s.trans, left + s.left, s.right + right, s.inverted, s.label)
            for s in self.steps
        )
        return PastingTerm(
            compose_functors(*left, self.source, *right),
            compose_functors(*left, self.target, *right),
            steps,
            self.label,
        )

    def reversed(self) -> PastingTerm:
        """The inverse term: steps in reverse order, each inverted."""
        steps = tuple(
            PastingStep(s.trans, s.left, s.right, not s.inverted, s.label)
            for s in reversed(self.steps)
        )
        return PastingTerm(self.target, self.source, steps, self.label)
