"""
Instance file loading and emission.

Loading validates the document shape with the pydantic schema, then
densifies names to ids family by family; any failure becomes a ParseError
carrying the field path. Emission is the inverse and writes sorted-key
JSON so that identical instances give byte-identical files.
"""
import json
from contextlib import contextmanager
from pathlib import Path
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from pydantic import ValidationError

from config import get_logger
from config.constants import SCHEMA_VERSION, Marked, Side, Variance
from fibcat.exceptions import DanglingId, FibcatError, ParseError
from fibcat.models.adjoint import AdjointAssignment, Adjunction
from fibcat.models.base import BaseCat, ProductData
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
from fibcat.models.fibered import FiberedCat
from fibcat.models.instance import (
    Instance,
    MorphismFamilies,
    MutationRecord,
    Oracle,
    RhoFamilies,
    SideAdjoints,
    TensorFamilies,
)
from fibcat.models.product import product
from fibcat.models.schema import (
    AdjointsDoc,
    AdjunctionDoc,
    BaseDoc,
    BoxDoc,
    CategoryDoc,
    Entry,
    FiberedDoc,
    FibMorphismDoc,
    FunctorDoc,
    InstanceDoc,
    MorphismDoc,
    MutationDoc,
    OracleDoc,
    ProductDoc,
    RhoDoc,
    TensorDoc,
)
from fibcat.services.ets import assoc_boundary, comm_boundary, m_boundary, rho_boundary

logger = get_logger(__name__)

PathLike = Union[str, Path]


@contextmanager
def _field(path: str) -> Iterator[None]:
    """Re-raise engine and value errors inside the block as ParseError at path."""
    try:
        yield
    except ParseError:
        raise
    except (FibcatError, ValueError, KeyError, IndexError) as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        raise ParseError(f"{message}", path) from exc


def _trans(
    source: Functor, target: Functor, components: Mapping[str, str], name: str
) -> NatTrans:
    """A transformation between known functors from a name -> name component map."""
    domain, codomain = source.source, source.target
    names = [domain.object_name(x) for x in domain.objects()]
    unknown = sorted(set(components) - set(names))
    if unknown:
        raise DanglingId("object", unknown[0], name)
    values = []
    for obj in names:
        if obj not in components:
            raise DanglingId("component at", obj, name)
        values.append(codomain.morphism_index(components[obj]))
    return NatTrans(source, target, tuple(values), name)


def _functor(source: Category, target: Category, doc: Union[FunctorDoc, BoxDoc], name: str) -> FinFunctor:
    return FinFunctor.from_names(source, target, doc.objects, doc.morphisms, name)


class _Loader:
    """Builds an Instance from a validated document."""

    def __init__(self, doc: InstanceDoc) -> None:
        self.doc = doc
        self.categories: Dict[str, FinCat] = {}

    def category(self, name: str, path: str) -> FinCat:
        if name not in self.categories:
            raise ParseError(f"unknown category {name!r}", path)
        return self.categories[name]

    def build(self) -> Instance:
        doc = self.doc
        for name, cdoc in sorted(doc.categories.items()):
            with _field(f"categories.{name}"):
                self.categories[name] = FinCat.build(
                    name,
                    cdoc.objects,
                    [(m.name, m.dom, m.cod) for m in cdoc.morphisms],
                    [(g, f, gf) for g, f, gf in cdoc.compose],
                    cdoc.identities or None,
                )
        base = self.base(doc.base)
        source = self.fibered(base, doc.source, "source")
        target = self.fibered(base, doc.target, "target") if doc.target is not None else None
        sides = {"source": source, "target": target or source}

        adjoints = {
            side: self.adjoints(sides[side], adoc, f"adjoints.{side}")
            for side, adoc in sorted(doc.adjoints.items())
        }
        if "target" in adjoints and target is None:
            raise ParseError("adjoints given for a missing target", "adjoints.target")

        morphism = None
        if doc.morphism is not None:
            morphism = self.morphism(source, sides["target"], doc.morphism, adjoints)

        tensors = {
            side: self.tensor(sides[side], tdoc, f"ets.{side}", adjoints.get(side))
            for side, tdoc in sorted(doc.ets.items())
        }
        rho = self.rho(doc.rho, tensors, morphism, sides) if doc.rho is not None else None
        oracle = self.oracle(doc.oracle, source, sides["target"], morphism, tensors) if doc.oracle else None
        mutation = None
        if doc.mutation is not None:
            md = doc.mutation
            mutation = MutationRecord(
                md.family, tuple(md.key), md.object, md.original, md.replacement, md.covered
            )
        return Instance(
            name=doc.name,
            base=base,
            source=source,
            target=target,
            morphism=morphism,
            adjoints=adjoints,
            tensors=tensors,
            rho=rho,
            oracle=oracle,
            mutation=mutation,
            seed=doc.seed,
        )

    def base(self, bdoc: BaseDoc) -> BaseCat:
        cat = self.category(bdoc.category, "base.category")
        with _field("base.smooth"):
            smooth = frozenset(cat.morphism_index(f) for f in bdoc.smooth)
        with _field("base.closed"):
            closed = frozenset(cat.morphism_index(f) for f in bdoc.closed)
        with _field("base.initial"):
            initial = cat.object_index(bdoc.initial) if bdoc.initial is not None else None
        products: Dict[Tuple[int, int], ProductData] = {}
        for i, p in enumerate(bdoc.products):
            with _field(f"base.products[{i}]"):
                products[(cat.object_index(p.left), cat.object_index(p.right))] = ProductData(
                    cat.object_index(p.obj), cat.morphism_index(p.first), cat.morphism_index(p.second)
                )
        complements: Dict[int, int] = {}
        for z, u in sorted(bdoc.complements.items()):
            with _field(f"base.complements.{z}"):
                complements[cat.morphism_index(z)] = cat.morphism_index(u)
        return BaseCat(cat, smooth, closed, initial, products, complements)

    def fibered(self, base: BaseCat, fdoc: FiberedDoc, path: str) -> FiberedCat:
        cat = base.cat
        fibers: List[Category] = []
        for S in cat.objects():
            obj = cat.object_name(S)
            if obj not in fdoc.fibers:
                raise ParseError(f"no fiber for object {obj!r}", f"{path}.fibers")
            fibers.append(self.category(fdoc.fibers[obj], f"{path}.fibers.{obj}"))
        with _field(f"{path}.fibers"):
            for obj in fdoc.fibers:
                cat.object_index(obj)
        functors: Dict[int, Functor] = {}
        for f_name, functor_doc in sorted(fdoc.functors.items()):
            with _field(f"{path}.functors.{f_name}"):
                f = cat.morphism_index(f_name)
                functors[f] = _functor(
                    fibers[cat.cod(f)], fibers[cat.dom(f)], functor_doc, f"{fdoc.name}[{f_name}]"
                )
        conn = {}
        for i, entry in enumerate(fdoc.conn):
            with _field(f"{path}.conn[{i}]"):
                f, g = (cat.morphism_index(x) for x in _key(entry, 2))
                gf = cat.compose(g, f)
                conn[(f, g)] = _trans(
                    functors[gf],
                    compose_functors(functors[f], functors[g]),
                    entry.components,
                    f"conn[{entry.key[0]},{entry.key[1]}]",
                )
        return FiberedCat(base, tuple(fibers), functors, conn, name=fdoc.name)

    def adjoints(self, h: FiberedCat, adoc: AdjointsDoc, path: str) -> SideAdjoints:
        smooth_left = self.assignment(h, adoc.smooth_left, Side.LEFT, Marked.SMOOTH, f"{path}.smooth_left")
        closed_right = self.assignment(
            h, adoc.closed_right, Side.RIGHT, Marked.CLOSED, f"{path}.closed_right"
        )
        return SideAdjoints(smooth_left, closed_right)

    def assignment(
        self,
        h: FiberedCat,
        entries: Mapping[str, AdjunctionDoc],
        side: Side,
        marked: Marked,
        path: str,
    ) -> Optional[AdjointAssignment]:
        if not entries:
            return None
        cat = h.base.cat
        built: Dict[int, Adjunction] = {}
        for f_name, adoc in sorted(entries.items()):
            with _field(f"{path}.{f_name}"):
                f = cat.morphism_index(f_name)
                inverse_image = h.functor(f)
                suffix = "#" if side == Side.LEFT else "*"
                adjoint = _functor(
                    h.fiber(cat.dom(f)), h.fiber(cat.cod(f)), adoc.functor, f"{f_name}{suffix}"
                )
                left, right = (adjoint, inverse_image) if side == Side.LEFT else (inverse_image, adjoint)
                unit = _trans(
                    IdentityFunctor(left.source), compose_functors(right, left), adoc.unit, f"eta[{f_name}]"
                )
                counit = _trans(
                    compose_functors(left, right), IdentityFunctor(left.target), adoc.counit, f"eps[{f_name}]"
                )
                built[f] = Adjunction(left, right, unit, counit, f_name)
        return AdjointAssignment(h, side, marked, built, f"{h.name}{'#' if side == Side.LEFT else '*'}")

    def morphism(
        self,
        source: FiberedCat,
        target: FiberedCat,
        mdoc: FibMorphismDoc,
        adjoints: Mapping[str, SideAdjoints],
    ) -> MorphismFamilies:
        cat = source.base.cat
        functors: List[Functor] = []
        for S in cat.objects():
            obj = cat.object_name(S)
            if obj not in mdoc.functors:
                raise ParseError(f"no functor at object {obj!r}", "morphism.functors")
            with _field(f"morphism.functors.{obj}"):
                functors.append(
                    _functor(source.fiber(S), target.fiber(S), mdoc.functors[obj], f"{mdoc.name}[{obj}]")
                )

        def theta_family(table: Optional[Mapping[str, Mapping[str, str]]], label: str) -> Optional[Dict[int, NatTrans]]:
            if table is None:
                return None
            family = {}
            for f_name, components in sorted(table.items()):
                with _field(f"morphism.{label}.{f_name}"):
                    f = cat.morphism_index(f_name)
                    in_obj, out_obj = source.ends(f)
                    family[f] = _trans(
                        compose_functors(target.functor(f), functors[in_obj]),
                        compose_functors(functors[out_obj], source.functor(f)),
                        components,
                        f"{label}[{f_name}]",
                    )
            return family

        theta_cl_bar = None
        if mdoc.theta_cl_bar is not None:
            first = adjoints.get("source", SideAdjoints()).closed_right
            second = adjoints.get("target", adjoints.get("source", SideAdjoints())).closed_right
            if first is None or second is None:
                raise ParseError("theta_cl_bar needs closed_right adjoints on both sides", "morphism.theta_cl_bar")
            theta_cl_bar = {}
            for f_name, components in sorted(mdoc.theta_cl_bar.items()):
                with _field(f"morphism.theta_cl_bar.{f_name}"):
                    z = cat.morphism_index(f_name)
                    dom, cod = cat.dom(z), cat.cod(z)
                    theta_cl_bar[z] = _trans(
                        compose_functors(second.adjoint(z), functors[dom]),
                        compose_functors(functors[cod], first.adjoint(z)),
                        components,
                        f"theta-bar[{f_name}]",
                    )
        return MorphismFamilies(
            tuple(functors),
            theta_family(mdoc.theta, "theta"),
            theta_family(mdoc.theta_sm, "theta_sm"),
            theta_family(mdoc.theta_cl, "theta_cl"),
            theta_cl_bar,
            mdoc.name,
        )

    def tensor(
        self, h: FiberedCat, tdoc: TensorDoc, path: str, adjoints: Optional[SideAdjoints]
    ) -> TensorFamilies:
        cat = h.base.cat
        box: Dict[Pair, Functor] = {}
        for i, bdoc in enumerate(tdoc.box):
            with _field(f"{path}.box[{i}]"):
                S1, S2 = cat.object_index(bdoc.left), cat.object_index(bdoc.right)
                S12 = h.base.product(S1, S2).obj
                box[(S1, S2)] = _functor(
                    product(h.fiber(S1), h.fiber(S2)), h.fiber(S12), bdoc, f"box[{bdoc.left},{bdoc.right}]"
                )
        e = ETSData(h, box, {})

        def m_family(entries: Optional[Sequence[Entry]], label: str, host: FiberedCat) -> Optional[Dict[Pair, NatTrans]]:
            if entries is None:
                return None
            carrier = ETSData(host, box, {})
            family = {}
            for i, entry in enumerate(entries):
                with _field(f"{path}.{label}[{i}]"):
                    f1, f2 = (cat.morphism_index(x) for x in _key(entry, 2))
                    source, target = m_boundary(carrier, f1, f2)
                    family[(f1, f2)] = _trans(
                        source, target, entry.components, f"{label}[{entry.key[0]},{entry.key[1]}]"
                    )
            return family

        m_cl_bar = None
        if tdoc.m_cl_bar is not None:
            if adjoints is None or adjoints.closed_right is None:
                raise ParseError("m_cl_bar needs closed_right adjoints", f"{path}.m_cl_bar")
            m_cl_bar = m_family(tdoc.m_cl_bar, "m_cl_bar", _direct_host(h, adjoints.closed_right))

        assoc = None
        if tdoc.assoc is not None:
            table = {}
            for i, entry in enumerate(tdoc.assoc):
                with _field(f"{path}.assoc[{i}]"):
                    S1, S2, S3 = (cat.object_index(x) for x in _key(entry, 3))
                    LA, RA = assoc_boundary(e, S1, S2, S3)
                    table[(S1, S2, S3)] = _trans(LA, RA, entry.components, f"a[{','.join(entry.key)}]")
            assoc = AssocConstraint(table)
        comm = None
        if tdoc.comm is not None:
            ctable = {}
            for i, entry in enumerate(tdoc.comm):
                with _field(f"{path}.comm[{i}]"):
                    S1, S2 = (cat.object_index(x) for x in _key(entry, 2))
                    source, target = comm_boundary(e, S1, S2)
                    ctable[(S1, S2)] = _trans(source, target, entry.components, f"c[{','.join(entry.key)}]")
            comm = CommConstraint(ctable)
        return TensorFamilies(
            box,
            m_family(tdoc.m, "m", h),
            m_family(tdoc.m_sm, "m_sm", h),
            m_family(tdoc.m_cl, "m_cl", h),
            m_cl_bar,
            assoc,
            comm,
        )

    def rho(
        self,
        rdoc: RhoDoc,
        tensors: Mapping[str, TensorFamilies],
        morphism: Optional[MorphismFamilies],
        sides: Mapping[str, FiberedCat],
    ) -> RhoFamilies:
        second = "target" if self.doc.target is not None else "source"
        if morphism is None or "source" not in tensors or second not in tensors:
            raise ParseError("rho needs a morphism and tensor structures on both sides", "rho")
        functors = morphism.functors
        e1 = ETSData(sides["source"], tensors["source"].box, {})
        e2 = ETSData(sides[second], tensors[second].box, {})
        cat = e1.host.base.cat

        def family(entries: Optional[Sequence[Entry]], label: str) -> Optional[Dict[Pair, NatTrans]]:
            if entries is None:
                return None
            table = {}
            for i, entry in enumerate(entries):
                with _field(f"rho.{label}[{i}]"):
                    S1, S2 = (cat.object_index(x) for x in _key(entry, 2))
                    source, target = rho_boundary(e1, e2, functors, S1, S2)
                    table[(S1, S2)] = _trans(source, target, entry.components, f"{label}[{','.join(entry.key)}]")
            return table

        return RhoFamilies(family(rdoc.rho, "rho"), family(rdoc.rho_sm, "rho_sm"), family(rdoc.rho_cl, "rho_cl"))

    def oracle(
        self,
        odoc: OracleDoc,
        source: FiberedCat,
        target: FiberedCat,
        morphism: Optional[MorphismFamilies],
        tensors: Mapping[str, TensorFamilies],
    ) -> Oracle:
        cat = source.base.cat
        theta = None
        if odoc.theta is not None:
            if morphism is None:
                raise ParseError("an oracle theta table needs a morphism", "oracle.theta")
            theta = {}
            for f_name, components in sorted(odoc.theta.items()):
                with _field(f"oracle.theta.{f_name}"):
                    f = cat.morphism_index(f_name)
                    in_obj, out_obj = source.ends(f)
                    theta[f] = _trans(
                        compose_functors(target.functor(f), morphism.functors[in_obj]),
                        compose_functors(morphism.functors[out_obj], source.functor(f)),
                        components,
                        f"theta[{f_name}]",
                    )
        m = None
        if odoc.m is not None:
            if "source" not in tensors:
                raise ParseError("an oracle m table needs a source tensor structure", "oracle.m")
            carrier = ETSData(source, tensors["source"].box, {})
            m = {}
            for i, entry in enumerate(odoc.m):
                with _field(f"oracle.m[{i}]"):
                    f1, f2 = (cat.morphism_index(x) for x in _key(entry, 2))
                    b_source, b_target = m_boundary(carrier, f1, f2)
                    m[(f1, f2)] = _trans(b_source, b_target, entry.components, f"m[{entry.key[0]},{entry.key[1]}]")
        return Oracle(theta, m)


def _key(entry: Entry, size: int) -> List[str]:
    if len(entry.key) != size:
        raise ValueError(f"key {entry.key} should have {size} names")
    return entry.key


def _direct_host(h: FiberedCat, assign: AdjointAssignment) -> FiberedCat:
    """The direct-variance host carrying only the adjoint functors (no connections)."""
    scope = frozenset(assign.morphisms())
    return FiberedCat(
        h.base,
        h.fibers,
        {f: assign.adjoint(f) for f in scope},
        {},
        Variance.DIRECT,
        scope,
        f"{h.name}*",
    )


def _validation_path(exc: ValidationError) -> Tuple[str, str]:
    first = exc.errors()[0]
    path = ".".join(str(part) for part in first.get("loc", ()))
    return first.get("msg", str(exc)), path


def parse_instance(text: str, origin: str = "<string>") -> Instance:
    """
    Parse instance file text.

    Raises:
        ParseError: With the line for malformed JSON or the field path otherwise
    """
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"{origin}:line {exc.lineno}") from exc
    try:
        doc = InstanceDoc.model_validate(payload)
    except ValidationError as exc:
        message, path = _validation_path(exc)
        raise ParseError(message, path) from exc
    instance = _Loader(doc).build()
    logger.debug(f"Loaded instance {instance.name} from {origin}")
    return instance


def load_instance(path: PathLike) -> Instance:
    """Read and parse an instance file."""
    file_path = Path(path)
    try:
        text = file_path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", str(file_path)) from exc
    return parse_instance(text, str(file_path))


# Emission


class _Emitter:
    """Turns an Instance back into a document, naming every category it meets."""

    def __init__(self, instance: Instance) -> None:
        self.instance = instance
        self.pool: List[Tuple[str, Category]] = []

    def name_of(self, category: Category) -> str:
        for name, known in self.pool:
            if known == category:
                return name
        taken = {name for name, _ in self.pool}
        name, k = category.name, 2
        while name in taken:
            name, k = f"{category.name}#{k}", k + 1
        self.pool.append((name, category))
        return name

    def emit(self) -> InstanceDoc:
        i = self.instance
        base = self.base(i.base)
        source = self.fibered(i.source)
        target = self.fibered(i.target) if i.target is not None else None
        adjoints = {side: self.adjoints(a) for side, a in sorted(i.adjoints.items())}
        morphism = self.morphism(i.morphism) if i.morphism is not None else None
        tensors = {side: self.tensor(t) for side, t in sorted(i.tensors.items())}
        rho = None
        if i.rho is not None:
            rho = RhoDoc(
                rho=_entries_by_objects(i.base.cat, i.rho.rho),
                rho_sm=_entries_by_objects(i.base.cat, i.rho.rho_sm),
                rho_cl=_entries_by_objects(i.base.cat, i.rho.rho_cl),
            )
        oracle = None
        if i.oracle is not None:
            oracle = OracleDoc(
                theta=_theta_table(i.base.cat, i.oracle.theta),
                m=_entries_by_morphisms(i.base.cat, i.oracle.m),
            )
        mutation = None
        if i.mutation is not None:
            r = i.mutation
            mutation = MutationDoc(
                family=r.family,
                key=list(r.key),
                object=r.obj,
                original=r.original,
                replacement=r.replacement,
                covered=r.covered,
            )
        return InstanceDoc(
            schema_version=SCHEMA_VERSION,
            name=i.name,
            seed=i.seed,
            categories={name: _category_doc(c) for name, c in self.pool},
            base=base,
            source=source,
            target=target,
            morphism=morphism,
            adjoints=adjoints,
            ets=tensors,
            rho=rho,
            oracle=oracle,
            mutation=mutation,
        )

    def base(self, b: BaseCat) -> BaseDoc:
        cat = b.cat
        return BaseDoc(
            category=self.name_of(cat),
            smooth=[cat.morphism_name(f) for f in sorted(b.smooth)],
            closed=[cat.morphism_name(f) for f in sorted(b.closed)],
            initial=cat.object_name(b.initial) if b.initial is not None else None,
            products=[
                ProductDoc(
                    left=cat.object_name(a),
                    right=cat.object_name(c),
                    obj=cat.object_name(p.obj),
                    first=cat.morphism_name(p.first),
                    second=cat.morphism_name(p.second),
                )
                for (a, c), p in sorted(b.products.items())
            ],
            complements={
                cat.morphism_name(z): cat.morphism_name(u) for z, u in sorted(b.open_complements.items())
            },
        )

    def fibered(self, h: FiberedCat) -> FiberedDoc:
        cat = h.base.cat
        return FiberedDoc(
            name=h.name,
            fibers={cat.object_name(S): self.name_of(h.fiber(S)) for S in cat.objects()},
            functors={cat.morphism_name(f): _functor_doc(h.functor(f)) for f in h.morphisms()},
            conn=[
                Entry(key=[cat.morphism_name(f), cat.morphism_name(g)], components=c.component_names())
                for (f, g), c in sorted(h.conn.items(), key=lambda item: item[0])
            ],
        )

    def adjoints(self, a: SideAdjoints) -> AdjointsDoc:
        return AdjointsDoc(
            smooth_left=_assignment_doc(a.smooth_left),
            closed_right=_assignment_doc(a.closed_right),
        )

    def morphism(self, m: MorphismFamilies) -> FibMorphismDoc:
        cat = self.instance.base.cat
        return FibMorphismDoc(
            name=m.name,
            functors={cat.object_name(S): _functor_doc(R) for S, R in enumerate(m.functors)},
            theta=_theta_table(cat, m.theta),
            theta_sm=_theta_table(cat, m.theta_sm),
            theta_cl=_theta_table(cat, m.theta_cl),
            theta_cl_bar=_theta_table(cat, m.theta_cl_bar),
        )

    def tensor(self, t: TensorFamilies) -> TensorDoc:
        cat = self.instance.base.cat
        boxes = []
        for (S1, S2), functor in sorted(t.box.items(), key=lambda item: item[0]):
            fdoc = _functor_doc(functor)
            boxes.append(
                BoxDoc(
                    left=cat.object_name(S1),
                    right=cat.object_name(S2),
                    objects=fdoc.objects,
                    morphisms=fdoc.morphisms,
                )
            )
        return TensorDoc(
            box=boxes,
            m=_entries_by_morphisms(cat, t.m),
            m_sm=_entries_by_morphisms(cat, t.m_sm),
            m_cl=_entries_by_morphisms(cat, t.m_cl),
            m_cl_bar=_entries_by_morphisms(cat, t.m_cl_bar),
            assoc=_entries_by_objects(cat, t.assoc.a if t.assoc is not None else None),
            comm=_entries_by_objects(cat, t.comm.c if t.comm is not None else None),
        )


def _category_doc(c: Category) -> CategoryDoc:
    compose = []
    for g in c.morphisms():
        if c.is_identity(g):
            continue
        for f in c.morphisms():
            if c.is_identity(f) or not c.composable(g, f):
                continue
            compose.append([c.morphism_name(g), c.morphism_name(f), c.morphism_name(c.compose(g, f))])
    return CategoryDoc(
        objects=[c.object_name(x) for x in c.objects()],
        morphisms=[
            MorphismDoc(name=c.morphism_name(f), dom=c.object_name(c.dom(f)), cod=c.object_name(c.cod(f)))
            for f in c.morphisms()
        ],
        identities={c.object_name(x): c.morphism_name(c.identity(x)) for x in c.objects()},
        compose=compose,
    )


def _functor_doc(functor: Functor) -> FunctorDoc:
    source, target = functor.source, functor.target
    morphisms = {}
    for f in source.morphisms():
        image = functor.mor(f)
        if source.is_identity(f) and image == target.identity(functor.obj(source.dom(f))):
            continue
        morphisms[source.morphism_name(f)] = target.morphism_name(image)
    return FunctorDoc(
        objects={source.object_name(x): target.object_name(functor.obj(x)) for x in source.objects()},
        morphisms=morphisms,
    )


def _assignment_doc(assign: Optional[AdjointAssignment]) -> Dict[str, AdjunctionDoc]:
    if assign is None:
        return {}
    cat = assign.host.base.cat
    return {
        cat.morphism_name(f): AdjunctionDoc(
            functor=_functor_doc(entry.left if assign.side == Side.LEFT else entry.right),
            unit=entry.unit.component_names(),
            counit=entry.counit.component_names(),
        )
        for f, entry in sorted(assign.entries.items(), key=lambda item: item[0])
    }


def _theta_table(cat: Category, family: Optional[Mapping[int, NatTrans]]) -> Optional[Dict[str, Dict[str, str]]]:
    if family is None:
        return None
    return {cat.morphism_name(f): t.component_names() for f, t in sorted(family.items(), key=lambda item: item[0])}


def _entries_by_morphisms(cat: Category, family: Optional[Mapping[Pair, NatTrans]]) -> Optional[List[Entry]]:
    if family is None:
        return None
    return [
        Entry(key=[cat.morphism_name(x) for x in key], components=t.component_names())
        for key, t in sorted(family.items(), key=lambda item: item[0])
    ]


def _entries_by_objects(cat: Category, family: Optional[Mapping[Tuple[int, ...], NatTrans]]) -> Optional[List[Entry]]:
    if family is None:
        return None
    return [
        Entry(key=[cat.object_name(x) for x in key], components=t.component_names())
        for key, t in sorted(family.items(), key=lambda item: item[0])
    ]


def instance_to_doc(instance: Instance) -> InstanceDoc:
    return _Emitter(instance).emit()


def dump_instance(instance: Instance) -> str:
    """Deterministic JSON text of an instance."""
    payload = instance_to_doc(instance).model_dump(exclude_none=True)
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def emit_instance(instance: Instance, path: PathLike) -> Path:
    """Write an instance file, creating parent directories."""
    file_path = Path(path)
    file_path.parent.mkdir(parents=True, exist_ok=True)
    file_path.write_text(dump_instance(instance), encoding="utf-8")
    logger.info(f"Wrote instance {instance.name} to {file_path}")
    return file_path
