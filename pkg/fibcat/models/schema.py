"""
Instance file schema.

Files are UTF-8 JSON. Every id is a string; keys of pair and triple
families are lists of names, and components are maps from object names of
the transformation's domain (joined with "|" for products) to morphism
names of its codomain. Boundaries are never stored: they follow from the
family a transformation belongs to.
"""
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from config.constants import MUTATION_FAMILIES, SCHEMA_VERSION

Components = Dict[str, str]


class Document(BaseModel):
    """Base for all schema nodes: unknown keys are errors."""

    model_config = ConfigDict(extra="forbid")


class MorphismDoc(Document):
    name: str
    dom: str
    cod: str


class CategoryDoc(Document):
    """A finite category as names, identities and composition triples (g, f, g∘f)."""

    objects: List[str]
    morphisms: List[MorphismDoc]
    identities: Dict[str, str] = Field(default_factory=dict)
    compose: List[List[str]] = Field(default_factory=list)

    @field_validator("compose")
    @classmethod
    def validate_compose(cls, v: List[List[str]]) -> List[List[str]]:
        for row in v:
            if len(row) != 3:
                raise ValueError(f"composition entries are [g, f, g∘f], got {row}")
        return v


class ProductDoc(Document):
    left: str
    right: str
    obj: str
    first: str
    second: str


class BaseDoc(Document):
    category: str
    smooth: List[str]
    closed: List[str]
    initial: Optional[str] = None
    products: List[ProductDoc] = Field(default_factory=list)
    complements: Dict[str, str] = Field(default_factory=dict)


class FunctorDoc(Document):
    """Object and morphism maps; identities may be omitted."""

    objects: Dict[str, str]
    morphisms: Dict[str, str] = Field(default_factory=dict)


class Entry(Document):
    """One member of a keyed family of transformations."""

    key: List[str]
    components: Components


class FiberedDoc(Document):
    name: str = "H"
    fibers: Dict[str, str]
    functors: Dict[str, FunctorDoc]
    conn: List[Entry] = Field(default_factory=list)


class FibMorphismDoc(Document):
    """A morphism of fibered categories and its partial θ families."""

    name: str = "R"
    functors: Dict[str, FunctorDoc]
    theta: Optional[Dict[str, Components]] = None
    theta_sm: Optional[Dict[str, Components]] = None
    theta_cl: Optional[Dict[str, Components]] = None
    theta_cl_bar: Optional[Dict[str, Components]] = None


class AdjunctionDoc(Document):
    """The adjoint functor with unit and counit components."""

    functor: FunctorDoc
    unit: Components
    counit: Components


class AdjointsDoc(Document):
    smooth_left: Dict[str, AdjunctionDoc] = Field(default_factory=dict)
    closed_right: Dict[str, AdjunctionDoc] = Field(default_factory=dict)


class BoxDoc(Document):
    """The box functor H(left) x H(right) -> H(left x right)."""

    left: str
    right: str
    objects: Dict[str, str]
    morphisms: Dict[str, str] = Field(default_factory=dict)


class TensorDoc(Document):
    box: List[BoxDoc]
    m: Optional[List[Entry]] = None
    m_sm: Optional[List[Entry]] = None
    m_cl: Optional[List[Entry]] = None
    m_cl_bar: Optional[List[Entry]] = None
    assoc: Optional[List[Entry]] = None
    comm: Optional[List[Entry]] = None


class RhoDoc(Document):
    rho: Optional[List[Entry]] = None
    rho_sm: Optional[List[Entry]] = None
    rho_cl: Optional[List[Entry]] = None


class OracleDoc(Document):
    """Tables the unique extensions must reproduce."""

    theta: Optional[Dict[str, Components]] = None
    m: Optional[List[Entry]] = None


class MutationDoc(Document):
    """Provenance of a single-component corruption."""

    family: str
    key: List[str]
    object: str
    original: str
    replacement: str
    covered: bool

    @field_validator("family")
    @classmethod
    def validate_family(cls, v: str) -> str:
        if v not in MUTATION_FAMILIES:
            raise ValueError(f"unknown mutation family: {v}")
        return v


class InstanceDoc(Document):
    """A complete instance file."""

    schema_version: int
    name: str
    seed: Optional[int] = None
    categories: Dict[str, CategoryDoc]
    base: BaseDoc
    source: FiberedDoc
    target: Optional[FiberedDoc] = None
    morphism: Optional[FibMorphismDoc] = None
    adjoints: Dict[str, AdjointsDoc] = Field(default_factory=dict)
    ets: Dict[str, TensorDoc] = Field(default_factory=dict)
    rho: Optional[RhoDoc] = None
    oracle: Optional[OracleDoc] = None
    mutation: Optional[MutationDoc] = None

    @field_validator("schema_version")
    @classmethod
    def validate_schema_version(cls, v: int) -> int:
        if v != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema version {v} (expected {SCHEMA_VERSION})")
        return v

    @field_validator("adjoints", "ets")
    @classmethod
    def validate_sides(cls, v: Dict[str, object]) -> Dict[str, object]:
        for side in v:
            if side not in ("source", "target"):
                raise ValueError(f"unknown side {side!r}; expected 'source' or 'target'")
        return v
