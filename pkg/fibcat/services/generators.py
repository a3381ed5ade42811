"""
Deterministic instance generators.

Fiber blueprints, strict presheaf instances, twisted instances carrying the
tables their unique extensions must reproduce, a thin non-adjointable
counterexample and single-component mutations.

All randomness comes from WordRng: raw 32-bit MT19937 words, drawn with
``random.Random(seed).getrandbits(32)`` and consumed in sorted id order. An
index below n is ``(word * n) >> 32`` and a derived seed is ``word >> 1``.
Only the raw word stream is relied on, which CPython keeps fixed across
releases, so a seed fixes the corpus byte for byte.
"""
import random
from dataclasses import dataclass, field, replace
from itertools import permutations
from itertools import product as cartesian
from typing import Callable, Dict, List, Optional, Sequence, Tuple, TypeVar

from config import get_logger
from config.constants import (
    BASE_BLUEPRINTS,
    FIBER_BLUEPRINTS,
    MUTATION_FAMILIES,
    TENSOR_FIBERS,
    Marked,
    Side,
)
from fibcat.exceptions import AddressInvalid, BadBlueprint, FibcatError, NotInvertible
from fibcat.models.adjoint import AdjointAssignment, Adjunction
from fibcat.models.base import BaseCat
from fibcat.models.category import (
    Category,
    FinCat,
    FinFunctor,
    Functor,
    IdentityFunctor,
    NatTrans,
    compose_functors,
)
from fibcat.models.ets import AssocConstraint, CommConstraint, ETSData, Pair
from fibcat.models.fibered import FiberedCat, FibMorphism
from fibcat.models.instance import (
    SIDES,
    Instance,
    MorphismFamilies,
    MutationRecord,
    Oracle,
    RhoFamilies,
    SideAdjoints,
    TensorFamilies,
)
from fibcat.models.product import PairFunctor, ProductCat, pair_trans, product, reassociate, swap
from fibcat.services.adjoint import transpose_theta
from fibcat.services.base import chain_base, powerset_base, product_of_morphisms
from fibcat.services.ets import assoc_boundary, comm_boundary, m_boundary, rho_boundary, symmetry, transpose_m
from fibcat.services.fibered import single, step
from fibcat.services.fincat import conjugate_functor, evaluate_pasting

logger = get_logger(__name__)

T = TypeVar("T")

Units = Dict[int, Tuple[int, ...]]


# Blueprints


def base_blueprint(name: str) -> BaseCat:
    """
    Build a base from its blueprint name.

    Raises:
        BadBlueprint: If the name is unknown
    """
    if name not in BASE_BLUEPRINTS:
        raise BadBlueprint(f"unknown base blueprint {name!r}; expected one of {sorted(BASE_BLUEPRINTS)}")
    kind, size = BASE_BLUEPRINTS[name]
    return chain_base(size) if kind == "chain" else powerset_base(size)


def _cyclic(name: str, n: int) -> FinCat:
    elements = ["e", "a"] + [f"a{k}" for k in range(2, n)]
    position = {g: k for k, g in enumerate(elements)}
    return FinCat.one_object(name, elements, lambda g, f: elements[(position[g] + position[f]) % n])


def _cycle_name(p: Tuple[int, ...]) -> str:
    seen, cycles = set(), []
    for start in range(len(p)):
        if start in seen or p[start] == start:
            continue
        cycle, x = [], start
        while x not in seen:
            seen.add(x)
            cycle.append(str(x + 1))
            x = p[x]
        cycles.append("(" + "".join(cycle) + ")")
    return "".join(cycles) or "e"


def _symmetric3() -> FinCat:
    perms = list(permutations(range(3)))
    names = {p: _cycle_name(p) for p in perms}
    by_name = {n: p for p, n in names.items()}

    def multiply(g: str, f: str) -> str:
        pg, pf = by_name[g], by_name[f]
        return names[tuple(pg[pf[i]] for i in range(3))]

    return FinCat.one_object("bs3", [names[p] for p in perms], multiply)


def fiber_category(name: str) -> FinCat:
    """
    The constant fiber of a blueprint.

    Raises:
        BadBlueprint: For unknown names and for sheaf2, whose fibers vary with the base object
    """
    if name == "bz2":
        return _cyclic("bz2", 2)
    if name == "bz3":
        return _cyclic("bz3", 3)
    if name == "bs3":
        return _symmetric3()
    if name == "mon2":
        return FinCat.one_object("mon2", ["e", "z"], lambda g, f: "e" if g == f == "e" else "z")
    if name == "chain2":
        return FinCat.thin("chain2", ["0", "1"], lambda a, c: a <= c)
    if name == "sheaf2":
        raise BadBlueprint("sheaf2 fibers depend on the base object")
    raise BadBlueprint(f"unknown fiber blueprint {name!r}; expected one of {sorted(FIBER_BLUEPRINTS)}")


def points(b: BaseCat, S: int) -> List[int]:
    """Join-irreducible objects below S, the points a sheaf fiber is a function on."""
    cat = b.cat
    found = []
    for x in cat.objects():
        if x == b.initial or not cat.hom(x, S):
            continue
        below = [y for y in cat.objects() if y != x and cat.hom(y, x)]
        maximal = [y for y in below if not any(z != y and cat.hom(y, z) for z in below)]
        if len(maximal) == 1:
            found.append(x)
    return found


def _bits(name: str) -> str:
    return name[1:-1]


def _function_name(bits: str) -> str:
    return f"<{bits}>"


def sheaf_fiber(b: BaseCat, S: int) -> FinCat:
    """Functions from the points below S to 0 <= 1, ordered pointwise."""
    k = len(points(b, S))
    elements = [_function_name("".join(v)) for v in cartesian("01", repeat=k)]
    return FinCat.thin(
        f"sheaf2[{b.cat.object_name(S)}]",
        elements,
        lambda a, c: all(x <= y for x, y in zip(_bits(a), _bits(c))),
    )


def _arrow(cat: Category, a: int, c: int) -> int:
    found = cat.hom(a, c)
    if not found:
        raise BadBlueprint(f"{cat.name}: no arrow {cat.object_name(a)} -> {cat.object_name(c)}")
    return found[0]


def _thin_functor(source: Category, target: Category, obj_fn: Callable[[str], str], name: str) -> FinFunctor:
    """A functor into a thin category, determined by its object map."""
    obj_map = tuple(target.object_index(obj_fn(source.object_name(x))) for x in source.objects())
    mor_map = tuple(
        _arrow(target, obj_map[source.dom(f)], obj_map[source.cod(f)]) for f in source.morphisms()
    )
    return FinFunctor(source, target, obj_map, mor_map, name)


def _thin_adjunction(left: Functor, right: Functor, name: str) -> Adjunction:
    """left ⊣ right between thin categories: unit and counit are the unique arrows."""
    A, B = left.source, left.target
    unit = tuple(_arrow(A, x, right.obj(left.obj(x))) for x in A.objects())
    counit = tuple(_arrow(B, left.obj(right.obj(y)), y) for y in B.objects())
    return Adjunction.from_components(left, right, unit, counit, name)


def _multiplication(fiber: FinCat, name: str) -> FinFunctor:
    """Multiplication G x G -> G of a commutative one-object fiber."""
    p = product(fiber, fiber)
    mor_map = tuple(fiber.compose(*p.decode_morphism(f)) for f in p.morphisms())
    return FinFunctor(p, fiber, (0,) * p.n_objects, mor_map, name)


def _pair_names(p: ProductCat, x: int) -> Tuple[str, str]:
    a, c = p.decode_object(x)
    return p.left.object_name(a), p.right.object_name(c)


def _thin_box(p: ProductCat, target: Category, obj_fn: Callable[[str, str], str], name: str) -> FinFunctor:
    obj_map = tuple(target.object_index(obj_fn(*_pair_names(p, x))) for x in p.objects())
    mor_map = tuple(_arrow(target, obj_map[p.dom(f)], obj_map[p.cod(f)]) for f in p.morphisms())
    return FinFunctor(p, target, obj_map, mor_map, name)


@dataclass(frozen=True, eq=False)
class FiberLayout:
    """Fibers, inverse images, adjoints and box functors of one blueprint over one base."""

    blueprint: str
    fibers: Tuple[FinCat, ...]
    functors: Dict[int, Functor]
    smooth_left: Dict[int, Adjunction]
    closed_right: Dict[int, Adjunction]
    box: Optional[Dict[Pair, Functor]] = None


def fiber_layout(b: BaseCat, blueprint: str) -> FiberLayout:
    """
    Lay a fiber blueprint over a base.

    Constant blueprints attach the same fiber everywhere with identity inverse
    images and identity adjunctions; sheaf2 restricts functions along
    morphisms, extends by 0 for left adjoints and by 1 for right adjoints.

    Raises:
        BadBlueprint: Unknown blueprint, or sheaf2 over a base without an initial object
    """
    cat = b.cat
    if blueprint == "sheaf2":
        return _sheaf_layout(b)
    fiber = fiber_category(blueprint)
    functors: Dict[int, Functor] = {f: FinFunctor.identity(fiber) for f in cat.morphisms()}
    smooth_left = {f: Adjunction.identity(fiber) for f in b.smooth if not cat.is_identity(f)}
    closed_right = {f: Adjunction.identity(fiber) for f in b.closed if not cat.is_identity(f)}
    box: Optional[Dict[Pair, Functor]] = None
    if blueprint in TENSOR_FIBERS and b.has_products:
        if fiber.n_objects == 1:
            B: Functor = _multiplication(fiber, f"box[{blueprint}]")
        else:
            B = _thin_box(product(fiber, fiber), fiber, lambda a, c: min(a, c), f"box[{blueprint}]")
        box = {(S1, S2): B for S1, S2 in cartesian(cat.objects(), repeat=2)}
    fibers = tuple(fiber for _ in cat.objects())
    return FiberLayout(blueprint, fibers, functors, smooth_left, closed_right, box)


def _sheaf_layout(b: BaseCat) -> FiberLayout:
    cat = b.cat
    if b.initial is None:
        raise BadBlueprint(f"sheaf2 needs a base with an initial object; {b.name} has none")
    pts = {S: points(b, S) for S in cat.objects()}
    fibers = tuple(sheaf_fiber(b, S) for S in cat.objects())

    def restriction(S: int, T: int) -> Callable[[str], str]:
        keep = [pts[S].index(x) for x in pts[T]]
        return lambda a: _function_name("".join(_bits(a)[i] for i in keep))

    def extension(T: int, S: int, fill: str) -> Callable[[str], str]:
        position = {x: i for i, x in enumerate(pts[T])}
        return lambda a: _function_name(
            "".join(_bits(a)[position[x]] if x in position else fill for x in pts[S])
        )

    functors: Dict[int, Functor] = {}
    smooth_left: Dict[int, Adjunction] = {}
    closed_right: Dict[int, Adjunction] = {}
    for f in cat.morphisms():
        T, S = cat.dom(f), cat.cod(f)
        name = cat.morphism_name(f)
        pull = _thin_functor(fibers[S], fibers[T], restriction(S, T), f"{name}^*")
        functors[f] = pull
        if cat.is_identity(f):
            continue
        if f in b.smooth:
            push = _thin_functor(fibers[T], fibers[S], extension(T, S, "0"), f"{name}_#")
            smooth_left[f] = _thin_adjunction(push, pull, f"{name}_# -| {name}^*")
        if f in b.closed:
            push = _thin_functor(fibers[T], fibers[S], extension(T, S, "1"), f"{name}_*")
            closed_right[f] = _thin_adjunction(pull, push, f"{name}^* -| {name}_*")

    box: Dict[Pair, Functor] = {}
    if b.has_products:
        for S1, S2 in cartesian(cat.objects(), repeat=2):
            S12 = b.product(S1, S2).obj
            first, second = restriction(S1, S12), restriction(S2, S12)

            def meet(a: str, c: str, first: Callable[[str], str] = first, second: Callable[[str], str] = second) -> str:
                return _function_name(
                    "".join(min(x, y) for x, y in zip(_bits(first(a)), _bits(second(c))))
                )

            box[(S1, S2)] = _thin_box(
                product(fibers[S1], fibers[S2]),
                fibers[S12],
                meet,
                f"box[{cat.object_name(S1)},{cat.object_name(S2)}]",
            )
    return FiberLayout("sheaf2", fibers, functors, smooth_left, closed_right, box or None)


# Strict instances


def _identity_between(source: Functor, target: Functor, name: str) -> NatTrans:
    """The identity transformation between two functors with equal object maps."""
    category = source.target
    return NatTrans(
        source,
        target,
        tuple(category.identity(source.obj(x)) for x in source.source.objects()),
        name,
    )


def _strict_conn(b: BaseCat, functors: Dict[int, Functor]) -> Dict[Tuple[int, int], NatTrans]:
    cat = b.cat
    conn = {}
    for f, g in cartesian(sorted(functors), repeat=2):
        if not cat.composable(g, f):
            continue
        gf = cat.compose(g, f)
        conn[(f, g)] = _identity_between(
            functors[gf],
            compose_functors(functors[f], functors[g]),
            f"conn[{cat.morphism_name(f)},{cat.morphism_name(g)}]",
        )
    return conn


def _closed_bar(
    morphism: FibMorphism, theta_cl: Dict[int, NatTrans], pair: Tuple[AdjointAssignment, AdjointAssignment]
) -> Dict[int, NatTrans]:
    closed = FibMorphism(morphism.source, morphism.target, morphism.functors, theta_cl, morphism.name)
    transpose = transpose_theta(closed, *pair)
    if not transpose.adjointable:
        cat = morphism.base.cat
        failed = transpose.failures()[0]
        raise NotInvertible(
            f"theta^cl of {morphism.name} is not right-adjointable",
            [cat.morphism_name(failed), transpose.witnesses.get(failed, "")],
        )
    return dict(transpose.family)


def _closed_m_bar(h: FiberedCat, box: Dict[Pair, Functor], m_cl: Dict[Pair, NatTrans], assign: AdjointAssignment) -> Dict[Pair, NatTrans]:
    transpose = transpose_m(ETSData(h, box, m_cl), assign)
    if not transpose.adjointable:
        raise NotInvertible(f"m^cl of {h.name} is not right-adjointable", [str(transpose.failures()[0])])
    return dict(transpose.family)


def _optional_m_bar(
    h: FiberedCat, box: Dict[Pair, Functor], m_cl: Dict[Pair, NatTrans], assign: AdjointAssignment
) -> Optional[Dict[Pair, NatTrans]]:
    """m-bar^cl, or None where m^cl is not right-adjointable."""
    transpose = transpose_m(ETSData(h, box, m_cl), assign)
    if not transpose.adjointable:
        logger.debug(f"m^cl of {h.name} is not right-adjointable; omitting m-bar^cl")
        return None
    return dict(transpose.family)


def _marked_pairs(b: BaseCat, family: Dict[Pair, NatTrans], marked: frozenset) -> Dict[Pair, NatTrans]:
    return {k: t for k, t in family.items() if k[0] in marked and k[1] in marked}


def strict_presheaf_instance(
    b: BaseCat,
    blueprint: str,
    tensor: bool = True,
    morphism: bool = True,
    name: Optional[str] = None,
) -> Instance:
    """
    A strict instance: conn, θ, m and every constraint are identities.

    Args:
        b: Base category
        blueprint: Fiber blueprint name
        tensor: Attach the box structure when the blueprint has one
        morphism: Attach the identity morphism with all its θ families
        name: Instance name; defaults to "<base>-<blueprint>-strict"

    Raises:
        BadBlueprint: Unknown or incompatible blueprint
    """
    cat = b.cat
    layout = fiber_layout(b, blueprint)
    h = FiberedCat(b, layout.fibers, dict(layout.functors), _strict_conn(b, layout.functors), name="H")
    left = AdjointAssignment(h, Side.LEFT, Marked.SMOOTH, dict(layout.smooth_left), "H#")
    right = AdjointAssignment(h, Side.RIGHT, Marked.CLOSED, dict(layout.closed_right), "H*")
    instance = Instance(
        name=name or f"{b.name}-{blueprint}-strict",
        base=b,
        source=h,
        adjoints={"source": SideAdjoints(left, right)},
    )

    functors: Tuple[Functor, ...] = tuple(FinFunctor.identity(fiber) for fiber in layout.fibers)
    if morphism:
        theta = {}
        for f in cat.morphisms():
            in_obj, out_obj = h.ends(f)
            theta[f] = _identity_between(
                compose_functors(h.functor(f), functors[in_obj]),
                compose_functors(functors[out_obj], h.functor(f)),
                f"theta[{cat.morphism_name(f)}]",
            )
        theta_cl = {f: t for f, t in theta.items() if f in b.closed}
        fm = FibMorphism(h, h, functors, theta)
        instance = replace(
            instance,
            morphism=MorphismFamilies(
                functors,
                theta,
                {f: t for f, t in theta.items() if f in b.smooth},
                theta_cl,
                _closed_bar(fm, theta_cl, (right, right)),
            ),
        )

    if tensor and layout.box is not None:
        box = layout.box
        e = ETSData(h, box, {})
        m = {}
        for f1, f2 in cartesian(cat.morphisms(), repeat=2):
            source, target = m_boundary(e, f1, f2)
            m[(f1, f2)] = _identity_between(source, target, f"m[{cat.morphism_name(f1)}|{cat.morphism_name(f2)}]")
        a = {}
        for key in cartesian(cat.objects(), repeat=3):
            LA, RA = assoc_boundary(e, *key)
            a[key] = _identity_between(LA, RA, "a")
        c = {}
        for S1, S2 in cartesian(cat.objects(), repeat=2):
            source, target = comm_boundary(e, S1, S2)
            c[(S1, S2)] = _identity_between(source, target, "c")
        m_cl = _marked_pairs(b, m, b.closed)
        tensors = TensorFamilies(
            box,
            m,
            _marked_pairs(b, m, b.smooth),
            m_cl,
            _optional_m_bar(h, box, m_cl, right),
            AssocConstraint(a),
            CommConstraint(c),
        )
        instance = replace(instance, tensors={"source": tensors})
        if morphism:
            rho = {}
            for S1, S2 in cartesian(cat.objects(), repeat=2):
                source, target = rho_boundary(e, e, functors, S1, S2)
                rho[(S1, S2)] = _identity_between(source, target, "rho")
            instance = replace(instance, rho=RhoFamilies(rho, dict(rho), dict(rho)))

    logger.debug(f"Built strict instance {instance.name}")
    return instance


# Twists


def _automorphisms(cat: Category, x: int) -> List[int]:
    return [u for u in cat.hom(x, x) if cat.is_iso(u)]


class WordRng:
    """
    Seeded stream of raw 32-bit Mersenne Twister words.

    Every draw is one getrandbits(32) word. Choices and derived seeds are
    reduced from it here, never through randrange or choice.
    """

    def __init__(self, seed: int) -> None:
        self._mt = random.Random(seed)

    def word(self) -> int:
        return self._mt.getrandbits(32)

    def index(self, n: int) -> int:
        """An index below n: (word * n) >> 32."""
        if n <= 0:
            raise ValueError(f"cannot draw an index below {n}")
        return (self.word() * n) >> 32

    def choice(self, items: Sequence[T]) -> T:
        return items[self.index(len(items))]

    def seed(self) -> int:
        """A 31-bit seed for a derived stream: word >> 1."""
        return self.word() >> 1


def _random_isos(rng: WordRng, functor: Functor) -> Tuple[int, ...]:
    """One random automorphism of F(x) per object x of the source."""
    return tuple(rng.choice(_automorphisms(functor.target, functor.obj(x))) for x in functor.source.objects())


@dataclass(frozen=True)
class TwistSpec:
    """
    Automorphisms a twist conjugates by.

    units[side][f] conjugates the inverse image along f, psi[S] the functor
    R_S and kappa[side][(S1, S2)] the box functor; each is a tuple with one
    automorphism per object of the functor's source. Missing entries are
    identities; entries on identity morphisms are ignored.
    """

    units: Dict[str, Units] = field(default_factory=dict)
    psi: Units = field(default_factory=dict)
    kappa: Dict[str, Dict[Pair, Tuple[int, ...]]] = field(default_factory=dict)
    seed: Optional[int] = None

    @classmethod
    def random(cls, instance: Instance, seed: int) -> "TwistSpec":
        """Uniform choices for every non-identity morphism, object and object pair."""
        rng = WordRng(seed)
        cat = instance.base.cat
        units: Dict[str, Units] = {}
        kappa: Dict[str, Dict[Pair, Tuple[int, ...]]] = {}
        for which in SIDES:
            h = instance.side(which)
            units[which] = {
                f: _random_isos(rng, h.functor(f)) for f in h.morphisms() if not cat.is_identity(f)
            }
            tensors = _side_tensors(instance, which)
            if tensors is not None:
                kappa[which] = {key: _random_isos(rng, tensors.box[key]) for key in sorted(tensors.box)}
        psi: Units = {}
        if instance.morphism is not None:
            psi = {S: _random_isos(rng, R) for S, R in enumerate(instance.morphism.functors)}
        return cls(units, psi, kappa, seed)


def _side_adjoints(i: Instance, which: str) -> SideAdjoints:
    return i.side_adjoints(which if i.target is not None else "source")


def _side_tensors(i: Instance, which: str) -> Optional[TensorFamilies]:
    return i.tensors.get(which if i.target is not None else "source")


def _conjugate(functor: Functor, isos: Optional[Tuple[int, ...]], name: str) -> Tuple[Functor, NatTrans]:
    if isos is None:
        return functor, NatTrans.identity(functor)
    return conjugate_functor(functor, isos, name)


def _twist_fibered(h: FiberedCat, units: Units) -> Tuple[FiberedCat, Dict[int, NatTrans]]:
    """Conjugated inverse images, their comparison isos and the transported connection."""
    cat = h.base.cat
    functors: Dict[int, Functor] = {}
    alpha: Dict[int, NatTrans] = {}
    for f in h.morphisms():
        F = h.functor(f)
        isos = None if cat.is_identity(f) else units.get(f)
        functors[f], alpha[f] = _conjugate(F, isos, F.name)
    conn = {}
    for (f, g), c in h.conn.items():
        gf = cat.compose(g, f)
        term = (
            step(alpha[gf], inverted=True)
            + single(c)
            + step(alpha[g], left=[h.functor(f)])
            + step(alpha[f], right=[functors[g]])
        )
        conn[(f, g)] = evaluate_pasting(term).named(c.name)
    twisted = FiberedCat(h.base, h.fibers, functors, conn, h.variance, h.scope, h.name)
    return twisted, alpha


def _twist_assignment(
    assign: Optional[AdjointAssignment], host: FiberedCat, alpha: Dict[int, NatTrans]
) -> Optional[AdjointAssignment]:
    """Keep the adjoint functors and move unit and counit along the comparison isos."""
    if assign is None:
        return None
    entries = {}
    for f, adj in assign.entries.items():
        a = alpha[f]
        if assign.side == Side.LEFT:
            unit = evaluate_pasting(single(adj.unit) + step(a, right=[adj.left]))
            counit = evaluate_pasting(step(a, left=[adj.left], inverted=True) + single(adj.counit))
            entries[f] = Adjunction(adj.left, a.target, unit.named(adj.unit.name), counit.named(adj.counit.name), adj.name)
        else:
            unit = evaluate_pasting(single(adj.unit) + step(a, left=[adj.right]))
            counit = evaluate_pasting(step(a, right=[adj.right], inverted=True) + single(adj.counit))
            entries[f] = Adjunction(a.target, adj.right, unit.named(adj.unit.name), counit.named(adj.counit.name), adj.name)
    return AdjointAssignment(host, assign.side, assign.marked, entries, assign.name)


@dataclass(frozen=True, eq=False)
class _TwistedSide:
    old: FiberedCat
    new: FiberedCat
    alpha: Dict[int, NatTrans]
    box: Dict[Pair, Functor] = field(default_factory=dict)
    new_box: Dict[Pair, Functor] = field(default_factory=dict)
    kappa: Dict[Pair, NatTrans] = field(default_factory=dict)


def _twist_theta(
    family: Optional[Dict[int, NatTrans]],
    s1: _TwistedSide,
    s2: _TwistedSide,
    R: Sequence[Functor],
    R_new: Sequence[Functor],
    psi: Sequence[NatTrans],
) -> Optional[Dict[int, NatTrans]]:
    if family is None:
        return None
    twisted = {}
    for f, t in family.items():
        in_obj, out_obj = s1.old.ends(f)
        into = step(psi[in_obj], left=[s2.old.functor(f)]) + step(s2.alpha[f], right=[R_new[in_obj]])
        out = step(s1.alpha[f], left=[R[out_obj]]) + step(psi[out_obj], right=[s1.new.functor(f)])
        twisted[f] = evaluate_pasting(into.reversed() + single(t) + out).named(t.name)
    return twisted


def _twist_m(family: Optional[Dict[Pair, NatTrans]], s: _TwistedSide) -> Optional[Dict[Pair, NatTrans]]:
    if family is None:
        return None
    b = s.old.base
    twisted = {}
    for (f1, f2), t in family.items():
        (in1, out1), (in2, out2) = s.old.ends(f1), s.old.ends(f2)
        f12 = product_of_morphisms(b, f1, f2)
        into = step(pair_trans(s.alpha[f1], s.alpha[f2]), left=[s.box[(out1, out2)]]) + step(
            s.kappa[(out1, out2)], right=[PairFunctor(s.new.functor(f1), s.new.functor(f2))]
        )
        out = step(s.kappa[(in1, in2)], left=[s.old.functor(f12)]) + step(
            s.alpha[f12], right=[s.new_box[(in1, in2)]]
        )
        twisted[(f1, f2)] = evaluate_pasting(into.reversed() + single(t) + out).named(t.name)
    return twisted


def _twist_assoc(a: Optional[AssocConstraint], s: _TwistedSide) -> Optional[AssocConstraint]:
    if a is None:
        return None
    h, b = s.old, s.old.base
    twisted = {}
    for (S1, S2, S3), t in a.a.items():
        S12, S23 = b.product(S1, S2).obj, b.product(S2, S3).obj
        I1, I3 = IdentityFunctor(h.fiber(S1)), IdentityFunctor(h.fiber(S3))
        shift = reassociate(h.fiber(S1), h.fiber(S2), h.fiber(S3))
        into = step(pair_trans(s.kappa[(S1, S2)], NatTrans.identity(I3)), left=[s.box[(S12, S3)]]) + step(
            s.kappa[(S12, S3)], right=[PairFunctor(s.new_box[(S1, S2)], I3)]
        )
        out = step(
            pair_trans(NatTrans.identity(I1), s.kappa[(S2, S3)]), left=[s.box[(S1, S23)]], right=[shift]
        ) + step(s.kappa[(S1, S23)], right=[PairFunctor(I1, s.new_box[(S2, S3)]), shift])
        twisted[(S1, S2, S3)] = evaluate_pasting(into.reversed() + single(t) + out).named(t.name)
    return AssocConstraint(twisted, a.name)


def _twist_comm(c: Optional[CommConstraint], s: _TwistedSide) -> Optional[CommConstraint]:
    if c is None:
        return None
    h = s.old
    twisted = {}
    for (S1, S2), t in c.c.items():
        tau = symmetry(h, S1, S2)
        flip = swap(h.fiber(S1), h.fiber(S2))
        out = step(s.kappa[(S2, S1)], left=[h.functor(tau)], right=[flip]) + step(
            s.alpha[tau], right=[s.new_box[(S2, S1)], flip]
        )
        twisted[(S1, S2)] = evaluate_pasting(
            step(s.kappa[(S1, S2)], inverted=True) + single(t) + out
        ).named(t.name)
    return CommConstraint(twisted, c.name)


def _twist_rho(
    family: Optional[Dict[Pair, NatTrans]],
    s1: _TwistedSide,
    s2: _TwistedSide,
    R: Sequence[Functor],
    R_new: Sequence[Functor],
    psi: Sequence[NatTrans],
) -> Optional[Dict[Pair, NatTrans]]:
    if family is None:
        return None
    b = s1.old.base
    twisted = {}
    for (S1, S2), t in family.items():
        S12 = b.product(S1, S2).obj
        into = step(pair_trans(psi[S1], psi[S2]), left=[s2.box[(S1, S2)]]) + step(
            s2.kappa[(S1, S2)], right=[PairFunctor(R_new[S1], R_new[S2])]
        )
        out = step(s1.kappa[(S1, S2)], left=[R[S12]]) + step(psi[S12], right=[s1.new_box[(S1, S2)]])
        twisted[(S1, S2)] = evaluate_pasting(into.reversed() + single(t) + out).named(t.name)
    return twisted


def twist_instance(i: Instance, spec: TwistSpec, name: Optional[str] = None) -> Instance:
    """
    Transport every structure of an instance along chosen automorphisms.

    Inverse images, R and box functors are conjugated; conn, θ, m, a, c and
    ρ are moved along the comparison isomorphisms, which makes them the
    induced coboundaries. Adjoint functors are kept and their units and
    counits moved. θ-bar and m-bar are recomputed by transposition. The
    oracle records the transported full θ and source m, which the unique
    extensions of the twisted skeleta must reproduce.

    Raises:
        NotIso: If a chosen morphism is not an automorphism of its object
        NotInvertible: If the twisted closed parts are not right-adjointable
    """
    twisted: Dict[str, _TwistedSide] = {}
    for which in SIDES:
        old = i.side(which)
        new, alpha = _twist_fibered(old, spec.units.get(which, {}))
        side = _TwistedSide(old, new, alpha)
        tensors = _side_tensors(i, which)
        if tensors is not None:
            kappa_isos = spec.kappa.get(which, {})
            new_box: Dict[Pair, Functor] = {}
            kappa: Dict[Pair, NatTrans] = {}
            for key, B in tensors.box.items():
                new_box[key], kappa[key] = _conjugate(B, kappa_isos.get(key), B.name)
            side = replace(side, box=dict(tensors.box), new_box=new_box, kappa=kappa)
        twisted[which] = side
    s1, s2 = twisted["source"], twisted["target"]

    adjoints = {}
    for which in SIDES:
        old_adj = _side_adjoints(i, which)
        side = twisted[which]
        adjoints[which] = SideAdjoints(
            _twist_assignment(old_adj.smooth_left, side.new, side.alpha),
            _twist_assignment(old_adj.closed_right, side.new, side.alpha),
        )

    tensors_out = {}
    for which in SIDES:
        t = _side_tensors(i, which)
        if t is None:
            continue
        side = twisted[which]
        m_cl = _twist_m(t.m_cl, side)
        m_cl_bar = None
        closed_right = adjoints[which].closed_right
        if t.m_cl_bar is not None and m_cl is not None and closed_right is not None:
            m_cl_bar = _closed_m_bar(side.new, side.new_box, m_cl, closed_right)
        tensors_out[which] = TensorFamilies(
            side.new_box,
            _twist_m(t.m, side),
            _twist_m(t.m_sm, side),
            m_cl,
            m_cl_bar,
            _twist_assoc(t.assoc, side),
            _twist_comm(t.comm, side),
        )

    morphism, rho, oracle = None, None, None
    if i.morphism is not None:
        mf = i.morphism
        R = mf.functors
        conjugated = [_conjugate(F, spec.psi.get(S), F.name) for S, F in enumerate(R)]
        R_new = tuple(F for F, _ in conjugated)
        psi = [u for _, u in conjugated]
        theta = _twist_theta(mf.theta, s1, s2, R, R_new, psi)
        theta_cl = _twist_theta(mf.theta_cl, s1, s2, R, R_new, psi)
        theta_cl_bar = None
        pair = (adjoints["source"].closed_right, adjoints["target"].closed_right)
        if mf.theta_cl_bar is not None and theta_cl is not None and pair[0] is not None and pair[1] is not None:
            fm = FibMorphism(s1.new, s2.new, R_new, {}, mf.name)
            theta_cl_bar = _closed_bar(fm, theta_cl, (pair[0], pair[1]))
        morphism = MorphismFamilies(
            R_new,
            theta,
            _twist_theta(mf.theta_sm, s1, s2, R, R_new, psi),
            theta_cl,
            theta_cl_bar,
            mf.name,
        )
        if i.rho is not None and s1.kappa and s2.kappa:
            rho = RhoFamilies(
                _twist_rho(i.rho.rho, s1, s2, R, R_new, psi),
                _twist_rho(i.rho.rho_sm, s1, s2, R, R_new, psi),
                _twist_rho(i.rho.rho_cl, s1, s2, R, R_new, psi),
            )
        source_m = tensors_out["source"].m if "source" in tensors_out else None
        oracle = Oracle(theta, source_m)

    result = Instance(
        name=name or f"{i.name}-twist{'' if spec.seed is None else spec.seed}",
        base=i.base,
        source=s1.new,
        target=s2.new,
        morphism=morphism,
        adjoints=adjoints,
        tensors=tensors_out,
        rho=rho,
        oracle=oracle,
        seed=spec.seed,
    )
    logger.debug(f"Twisted {i.name} into {result.name}")
    return result


def without_full(i: Instance) -> Instance:
    """Drop the full θ, m and ρ so only skeleta, cores and the oracle remain."""
    morphism = replace(i.morphism, theta=None) if i.morphism is not None else None
    tensors = {which: replace(t, m=None) for which, t in i.tensors.items()}
    rho = replace(i.rho, rho=None) if i.rho is not None else None
    return replace(i, morphism=morphism, tensors=tensors, rho=rho)


# Counterexample


def thin_counterexample_instance(mode: str = "right") -> Instance:
    """
    A morphism over chain2 whose transposed θ lands on a non-identity thin arrow.

    H(0) is a point, H(1) the chain 0 <= 1 and f^* collapses it. R_1 is
    constant at 0 ("right": z_* picks the top, so θ along f is not
    right-adjointable) or at 1 ("left": f_# picks the bottom, so it is not
    left-adjointable). Everything else passes.

    Raises:
        BadBlueprint: If mode is neither "right" nor "left"
    """
    if mode not in ("right", "left"):
        raise BadBlueprint(f"unknown counterexample mode {mode!r}")
    b = chain_base(2)
    cat = b.cat
    low, high = cat.object_index("0"), cat.object_index("1")
    f = cat.morphism_index("0<=1")
    chain = fiber_category("chain2")
    point = FinCat.terminal("point")
    fibers: Tuple[FinCat, ...] = (point, chain) if low == 0 else (chain, point)
    pull = FinFunctor.constant(chain, point, 0, "f^*")
    functors: Dict[int, Functor] = {
        cat.identity(low): FinFunctor.identity(point),
        cat.identity(high): FinFunctor.identity(chain),
        f: pull,
    }
    h = FiberedCat(b, fibers, functors, _strict_conn(b, functors), name="H")
    top = FinFunctor.constant(point, chain, chain.object_index("1"), "f_*")
    bottom = FinFunctor.constant(point, chain, chain.object_index("0"), "f_#")
    left = AdjointAssignment(h, Side.LEFT, Marked.SMOOTH, {f: _thin_adjunction(bottom, pull, "f_# -| f^*")}, "H#")
    right = AdjointAssignment(h, Side.RIGHT, Marked.CLOSED, {f: _thin_adjunction(pull, top, "f^* -| f_*")}, "H*")

    value = chain.object_index("0" if mode == "right" else "1")
    R: Dict[int, Functor] = {
        low: FinFunctor.identity(point),
        high: FinFunctor.constant(chain, chain, value, f"const[{chain.object_name(value)}]"),
    }
    functors_R = tuple(R[S] for S in cat.objects())
    theta = {}
    for g in cat.morphisms():
        in_obj, out_obj = h.ends(g)
        theta[g] = _identity_between(
            compose_functors(h.functor(g), functors_R[in_obj]),
            compose_functors(functors_R[out_obj], h.functor(g)),
            f"theta[{cat.morphism_name(g)}]",
        )
    theta_cl = dict(theta)
    theta_cl_bar = None
    transpose = transpose_theta(FibMorphism(h, h, functors_R, theta_cl), right, right)
    if transpose.adjointable:
        theta_cl_bar = dict(transpose.family)
    return Instance(
        name=f"chain2-thin-counterexample-{mode}",
        base=b,
        source=h,
        morphism=MorphismFamilies(functors_R, theta, dict(theta), theta_cl, theta_cl_bar),
        adjoints={"source": SideAdjoints(left, right)},
    )


# Mutations


@dataclass(frozen=True)
class MutationSpec:
    """One component to corrupt: family, key names, object name and replacement morphism name."""

    family: str
    key: Tuple[str, ...]
    obj: str
    replacement: str


_OBJECT_KEYED = {"source.assoc": 3, "source.comm": 2, "rho": 2}


def _arity(family: str) -> int:
    if family in _OBJECT_KEYED:
        return _OBJECT_KEYED[family]
    return 1 if family.startswith("theta") else 2


def _table(i: Instance, family: str) -> Optional[Dict]:
    """The family's dict as stored in the instance, or None when absent."""
    which, _, attribute = family.rpartition(".")
    if attribute == "conn":
        if which == "target" and i.target is None:
            return None
        return dict(i.side(which).conn)
    if family.startswith("theta"):
        return None if i.morphism is None else getattr(i.morphism, family)
    if family == "rho":
        return None if i.rho is None else i.rho.rho
    t = i.tensors.get("source")
    if t is None:
        return None
    if attribute == "assoc":
        return None if t.assoc is None else t.assoc.a
    if attribute == "comm":
        return None if t.comm is None else t.comm.c
    return getattr(t, attribute)


def _with_table(i: Instance, family: str, table: Dict) -> Instance:
    which, _, attribute = family.rpartition(".")
    if attribute == "conn":
        old = i.side(which)
        h = replace(old, conn=table)
        stored = _side_adjoints(i, which)
        adjoints = dict(i.adjoints)
        adjoints[which if i.target is not None else "source"] = SideAdjoints(
            replace(stored.smooth_left, host=h) if stored.smooth_left is not None else None,
            replace(stored.closed_right, host=h) if stored.closed_right is not None else None,
        )
        if which == "source":
            return replace(i, source=h, adjoints=adjoints)
        return replace(i, target=h, adjoints=adjoints)
    if family.startswith("theta"):
        assert i.morphism is not None
        return replace(i, morphism=replace(i.morphism, **{family: table}))
    if family == "rho":
        assert i.rho is not None
        return replace(i, rho=replace(i.rho, rho=table))
    t = i.tensors["source"]
    if attribute == "assoc":
        assert t.assoc is not None
        t = replace(t, assoc=AssocConstraint(table, t.assoc.name))
    elif attribute == "comm":
        assert t.comm is not None
        t = replace(t, comm=CommConstraint(table, t.comm.name))
    else:
        t = replace(t, **{attribute: table})
    return replace(i, tensors={**i.tensors, "source": t})


def _key_ids(i: Instance, family: str, key: Sequence[str]) -> Tuple[int, ...]:
    cat = i.base.cat
    if len(key) != _arity(family):
        raise AddressInvalid(f"{family} keys have {_arity(family)} names, got {list(key)}")
    lookup = cat.object_index if family in _OBJECT_KEYED else cat.morphism_index
    try:
        return tuple(lookup(k) for k in key)
    except FibcatError as exc:
        raise AddressInvalid(f"{family}: {exc}") from exc


def mutate_instance(i: Instance, spec: MutationSpec) -> Instance:
    """
    Replace one component of one transformation.

    Raises:
        AddressInvalid: Unknown family, key, object or replacement, or a
            replacement that equals the original or has the wrong ends
    """
    if spec.family not in MUTATION_FAMILIES:
        raise AddressInvalid(f"unknown mutation family {spec.family!r}")
    table = _table(i, spec.family)
    if table is None:
        raise AddressInvalid(f"{i.name} has no {spec.family} family")
    ids = _key_ids(i, spec.family, spec.key)
    dict_key = ids[0] if len(ids) == 1 else ids
    if dict_key not in table:
        raise AddressInvalid(f"{spec.family} has no entry at {list(spec.key)}")
    t: NatTrans = table[dict_key]
    try:
        x = t.domain.object_index(spec.obj)
        r = t.codomain.morphism_index(spec.replacement)
    except FibcatError as exc:
        raise AddressInvalid(f"{spec.family}: {exc}") from exc
    codomain = t.codomain
    original = t[x]
    if r == original:
        raise AddressInvalid(f"replacement {spec.replacement} equals the original component")
    if codomain.dom(r) != codomain.dom(original) or codomain.cod(r) != codomain.cod(original):
        raise AddressInvalid(
            f"replacement {codomain.describe(r)} does not type-check against {codomain.describe(original)}"
        )
    table = dict(table)
    table[dict_key] = t.replace(x, r)
    record = MutationRecord(
        spec.family,
        tuple(spec.key),
        spec.obj,
        codomain.morphism_name(original),
        spec.replacement,
        covered(i, spec.family, ids, codomain.is_iso(r)),
    )
    mutated = _with_table(i, spec.family, table)
    return replace(mutated, name=f"{i.name}-mut-{spec.family}", mutation=record)


def _group_fibers(i: Instance) -> bool:
    return all(
        fiber.n_objects == 1 and all(fiber.is_iso(u) for u in fiber.morphisms())
        for which in i.sides()
        for fiber in i.side(which).fibers
    )


def _incident(b: BaseCat, S: int) -> bool:
    cat = b.cat
    return any(not cat.is_identity(f) and S in (cat.dom(f), cat.cod(f)) for f in cat.morphisms())


def _theta_partner(cat: FinCat, f: int, scope: Dict) -> bool:
    """A non-identity morphism composable with f on either side whose composite carries θ too."""
    for g in scope:
        if cat.is_identity(g):
            continue
        if cat.composable(g, f) and cat.compose(g, f) in scope:
            return True
        if cat.composable(f, g) and cat.compose(f, g) in scope:
            return True
    return False


def _m_partner(b: BaseCat, key: Pair, scope: Dict) -> bool:
    cat = b.cat
    f1, f2 = key
    for g1, g2 in scope:
        if cat.is_identity(g1) and cat.is_identity(g2):
            continue
        if cat.composable(g1, f1) and cat.composable(g2, f2):
            if (cat.compose(g1, f1), cat.compose(g2, f2)) in scope:
                return True
        if cat.composable(f1, g1) and cat.composable(f2, g2):
            if (cat.compose(f1, g1), cat.compose(f2, g2)) in scope:
                return True
    return False


def covered(i: Instance, family: str, ids: Tuple[int, ...], invertible: bool) -> bool:
    """
    Whether some enumerated diagram is guaranteed to see the mutated component.

    A non-invertible replacement always breaks an invertibility law. For an
    invertible one the rules are structural and assume group fibers, where
    whiskering is bijective; over other fibers only the first rule applies.
    """
    if not invertible:
        return True
    if not _group_fibers(i):
        return False
    b = i.base
    cat = b.cat
    both = b.smooth & b.closed
    table = _table(i, family) or {}
    which, _, attribute = family.rpartition(".")

    if attribute == "conn":
        f, g = ids
        if cat.is_identity(f) or cat.is_identity(g):
            return True
        scope = i.side(which).scope
        after = any(not cat.is_identity(k) and cat.dom(k) == cat.cod(g) for k in scope)
        before = any(not cat.is_identity(e) and cat.cod(e) == cat.dom(f) for e in scope)
        return after or before

    if family.startswith("theta"):
        (f,) = ids
        if cat.is_identity(f):
            return True
        m = i.morphism
        assert m is not None
        if family == "theta_sm" and f in both and m.theta_cl is not None and f in m.theta_cl:
            return True
        if family == "theta_cl" and f in both and m.theta_sm is not None and f in m.theta_sm:
            return True
        if family == "theta_cl_bar" and f in b.smooth and m.theta_sm is not None:
            return True
        return _theta_partner(cat, f, table)

    if attribute in ("m", "m_sm", "m_cl", "m_cl_bar"):
        f1, f2 = ids
        if cat.is_identity(f1) and cat.is_identity(f2):
            return True
        t = i.tensors["source"]
        if attribute == "m_sm" and f1 in both and f2 in both and t.m_cl is not None and ids in t.m_cl:
            return True
        if attribute == "m_cl" and f1 in both and f2 in both and t.m_sm is not None and ids in t.m_sm:
            return True
        if attribute == "m_cl_bar" and f1 in b.smooth and f2 in b.smooth and t.m_sm is not None:
            return True
        return _m_partner(b, (f1, f2), table)

    if attribute == "assoc":
        return any(_incident(b, S) for S in ids)
    if attribute == "comm":
        S1, S2 = ids
        return S1 != S2 or _incident(b, S1)
    return any(_incident(b, S) for S in ids)


def _candidates(i: Instance, family: str) -> List[Tuple[Tuple[int, ...], NatTrans, int, List[int]]]:
    """Every (key, transformation, object, alternatives) a mutation could address."""
    table = _table(i, family)
    if not table:
        return []
    found = []
    for key in sorted(table):
        t = table[key]
        codomain = t.codomain
        for x, c in enumerate(t.components):
            alternatives = [r for r in codomain.hom(codomain.dom(c), codomain.cod(c)) if r != c]
            if alternatives:
                found.append((key if isinstance(key, tuple) else (key,), t, x, alternatives))
    return found


def _key_names(i: Instance, family: str, ids: Tuple[int, ...]) -> Tuple[str, ...]:
    cat = i.base.cat
    name = cat.object_name if family in _OBJECT_KEYED else cat.morphism_name
    return tuple(name(k) for k in ids)


def random_mutation(i: Instance, family: str, rng: WordRng) -> Optional[MutationSpec]:
    """A uniformly chosen mutation of one family, or None if nothing can be changed."""
    candidates = _candidates(i, family)
    if not candidates:
        return None
    ids, t, x, alternatives = rng.choice(candidates)
    return MutationSpec(
        family,
        _key_names(i, family, ids),
        t.domain.object_name(x),
        t.codomain.morphism_name(rng.choice(alternatives)),
    )


# Corpus


CORPUS_BASES = ("chain2", "chain3", "powerset2", "powerset3")
TENSOR_BASES = ("chain2", "chain3", "powerset2")
TWIST_FIBERS = ("bz2", "bz3", "bs3")
TWIST_SEEDS = 2


def strict_corpus() -> List[Instance]:
    """Every base blueprint with every fiber blueprint."""
    corpus = []
    for base_name in CORPUS_BASES:
        b = base_blueprint(base_name)
        for blueprint in FIBER_BLUEPRINTS:
            corpus.append(strict_presheaf_instance(b, blueprint, tensor=base_name in TENSOR_BASES))
    return corpus


def twisted_instance(base_name: str, blueprint: str, seed: int, keep_full: bool = False) -> Instance:
    """
    A randomly twisted strict instance.

    Without keep_full only skeleta, cores and the oracle are kept, so the
    full θ and m must be recovered by extension.
    """
    b = base_blueprint(base_name)
    strict = strict_presheaf_instance(b, blueprint, tensor=base_name in TENSOR_BASES)
    twisted = twist_instance(strict, TwistSpec.random(strict, seed), f"{base_name}-{blueprint}-twist{seed}")
    return twisted if keep_full else without_full(twisted)


def corpus_twists(seed: int) -> List[Tuple[str, str, int]]:
    """(base, fiber, twist seed) for each twisted corpus instance, in corpus order."""
    rng = WordRng(seed)
    return [
        (base_name, blueprint, rng.seed())
        for base_name in CORPUS_BASES
        for blueprint in TWIST_FIBERS
        for _ in range(TWIST_SEEDS)
    ]


def build_corpus(seed: int) -> List[Instance]:
    """Strict instances for all blueprints plus TWIST_SEEDS twists of each group blueprint."""
    corpus = strict_corpus()
    for base_name, blueprint, twist_seed in corpus_twists(seed):
        corpus.append(twisted_instance(base_name, blueprint, twist_seed))
    logger.info(f"Built corpus of {len(corpus)} instances from seed {seed}")
    return corpus


BATTERY_PARENTS = (
    ("chain2", "bz3"),
    ("powerset2", "bz2"),
    ("chain3", "bz3"),
    ("powerset2", "mon2"),
    ("chain3", "bs3"),
)


@dataclass
class MutationBattery:
    """Mutated instances and the mutations no enumerated diagram is guaranteed to see."""

    instances: List[Instance] = field(default_factory=list)
    undetectable: List[MutationRecord] = field(default_factory=list)


def mutation_battery(seed: int, count: int) -> MutationBattery:
    """
    count mutations cycling through parents and families.

    Parents are twisted instances with every family present. Families a
    parent lacks or cannot vary are skipped.
    """
    rng = WordRng(seed)
    parents = [
        twisted_instance(base_name, blueprint, rng.seed(), keep_full=True)
        for base_name, blueprint in BATTERY_PARENTS
    ]
    battery = MutationBattery()
    slots = [(p, family) for family in MUTATION_FAMILIES for p in parents]
    attempts = 0
    while len(battery.instances) < count and attempts < count * len(slots):
        parent, family = slots[attempts % len(slots)]
        attempts += 1
        spec = random_mutation(parent, family, rng)
        if spec is None:
            continue
        mutated = mutate_instance(parent, spec)
        mutated = replace(mutated, name=f"mutant-{len(battery.instances):04d}-{family}", seed=seed)
        battery.instances.append(mutated)
        assert mutated.mutation is not None
        if not mutated.mutation.covered:
            battery.undetectable.append(mutated.mutation)
    logger.info(
        f"Mutation battery: {len(battery.instances)} mutants, "
        f"{len(battery.undetectable)} outside every enumerated diagram"
    )
    return battery
