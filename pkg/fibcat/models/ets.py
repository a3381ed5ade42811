"""
External tensor structures: box functors H(S1) x H(S2) -> H(S1 x S2),
monoidality isomorphisms, constraints and their skeleton/core variants.
"""
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from config.constants import Variance
from fibcat.exceptions import MissingData
from fibcat.models.adjoint import AdjointAssignment
from fibcat.models.category import Functor, NatTrans
from fibcat.models.fibered import FiberedCat, FibMorphism
from fibcat.models.skeleton import CoreData, SkeletonData

Pair = Tuple[int, int]
Triple = Tuple[int, int, int]


def _missing(kind: str, host: FiberedCat, key: Tuple[int, ...], objects: bool) -> MissingData:
    cat = host.base.cat
    name = cat.object_name if objects else cat.morphism_name
    return MissingData(f"{host.name}: no {kind} at ({', '.join(name(k) for k in key)})")


@dataclass(frozen=True, eq=False)
class ETSData:
    """
    Box functors and monoidality isomorphisms.

    m[(f1, f2)]: B_out ∘ (F(f1) x F(f2)) ⇒ F(f1 x f2) ∘ B_in, which for
    inverse images reads f1^*A1 ⊠ f2^*A2 ⇒ (f1 x f2)^*(A1 ⊠ A2).
    """

    host: FiberedCat
    box: Dict[Pair, Functor]
    m: Dict[Pair, NatTrans]
    name: str = "box"

    @property
    def variance(self) -> Variance:
        return self.host.variance

    def box_at(self, a: int, b: int) -> Functor:
        try:
            return self.box[(a, b)]
        except KeyError:
            raise _missing("box functor", self.host, (a, b), True) from None

    def m_at(self, f1: int, f2: int) -> NatTrans:
        try:
            return self.m[(f1, f2)]
        except KeyError:
            raise _missing("monoidality isomorphism", self.host, (f1, f2), False) from None

    def pairs(self) -> List[Pair]:
        """Morphism pairs carrying m, both legs in the host's scope."""
        scope = self.host.scope
        return sorted(k for k in self.m if k[0] in scope and k[1] in scope)

    def with_m(self, m: Dict[Pair, NatTrans], host: Optional[FiberedCat] = None) -> "ETSData":
        return ETSData(host or self.host, self.box, m, self.name)


@dataclass(frozen=True, eq=False)
class ETSkeletonData:
    """m^sm on pairs of smooth morphisms and m^cl on pairs of closed ones, sharing one box."""

    host: FiberedCat
    box: Dict[Pair, Functor]
    m_sm: Dict[Pair, NatTrans]
    m_cl: Dict[Pair, NatTrans]
    name: str = "box"

    def smooth_part(self) -> ETSData:
        return ETSData(self.host, self.box, self.m_sm, f"{self.name}^smooth")

    def closed_part(self) -> ETSData:
        return ETSData(self.host, self.box, self.m_cl, f"{self.name}^closed")


@dataclass(frozen=True, eq=False)
class ETCoreData:
    """m^sm with left adjoints, and m-bar^cl in the direct-image variance."""

    host: FiberedCat
    box: Dict[Pair, Functor]
    m_sm: Dict[Pair, NatTrans]
    m_cl_bar: Dict[Pair, NatTrans]
    smooth_left: AdjointAssignment
    closed_right: AdjointAssignment
    name: str = "box"

    def smooth_part(self) -> ETSData:
        return ETSData(self.host, self.box, self.m_sm, f"{self.name}^smooth")


@dataclass(frozen=True, eq=False)
class AssocConstraint:
    """a[(S1, S2, S3)]: (A1 ⊠ A2) ⊠ A3 ⇒ A1 ⊠ (A2 ⊠ A3)."""

    a: Dict[Triple, NatTrans]
    name: str = "a"

    def at(self, host: FiberedCat, key: Triple) -> NatTrans:
        try:
            return self.a[key]
        except KeyError:
            raise _missing("associativity constraint", host, key, True) from None


@dataclass(frozen=True, eq=False)
class CommConstraint:
    """c[(S1, S2)]: A1 ⊠ A2 ⇒ τ^*(A2 ⊠ A1)."""

    c: Dict[Pair, NatTrans]
    name: str = "c"

    def at(self, host: FiberedCat, key: Pair) -> NatTrans:
        try:
            return self.c[key]
        except KeyError:
            raise _missing("commutativity constraint", host, key, True) from None


@dataclass(frozen=True, eq=False)
class MorETS:
    """ρ[(S1, S2)]: R(A1) ⊠2 R(A2) ⇒ R(A1 ⊠1 A2) over a morphism of fibered categories."""

    morphism: FibMorphism
    source_ets: ETSData
    target_ets: ETSData
    rho: Dict[Pair, NatTrans]
    name: str = "rho"


@dataclass(frozen=True, eq=False)
class MorETSkeletonData:
    """ρ^sm and ρ^cl over a skeleton and the tensor skeleta of both sides."""

    skeleton: SkeletonData
    source_ets: ETSkeletonData
    target_ets: ETSkeletonData
    rho_sm: Dict[Pair, NatTrans]
    rho_cl: Dict[Pair, NatTrans]
    name: str = "rho"


@dataclass(frozen=True, eq=False)
class MorETCoreData:
    """ρ^sm and ρ^cl over a core and the tensor cores of both sides."""

    core: CoreData
    source_ets: ETCoreData
    target_ets: ETCoreData
    rho_sm: Dict[Pair, NatTrans]
    rho_cl: Dict[Pair, NatTrans]
    name: str = "rho"
