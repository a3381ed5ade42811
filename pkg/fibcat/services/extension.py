"""
Full structures of an instance: the declared θ and m families when present,
otherwise the unique extensions of the declared skeleta or cores.
"""
from dataclasses import replace
from typing import Dict, List, Optional

from config import get_logger
from config.constants import ExtendTarget
from fibcat.exceptions import MissingData
from fibcat.models.ets import ETSData, MorETS, Pair
from fibcat.models.category import NatTrans
from fibcat.models.fibered import FibMorphism
from fibcat.models.instance import Instance
from fibcat.services.ets import ets_core_to_skeleton, extend_ets_skeleton
from fibcat.services.skeleton import core_to_skeleton, extend_skeleton

logger = get_logger(__name__)


def tensor_sides(i: Instance) -> List[str]:
    """Sides of the instance that carry box functors."""
    return [which for which in i.sides() if which in i.tensors]


def extend_morphism(i: Instance, target: ExtendTarget = ExtendTarget.SKELETON) -> FibMorphism:
    """
    Extend the instance's skeleton (or core) to θ on every base morphism.

    Raises:
        MissingData: If the instance has no data of that kind
        NotInvertible: If θ^cl cannot be recovered from a core
        ExtensionFailure: If the data does not extend
    """
    if target == ExtendTarget.CORE:
        core = i.core()
        if core is None:
            raise MissingData(f"{i.name}: no core (theta_sm, theta_cl_bar and adjoints)")
        skeleton = core_to_skeleton(core)
    else:
        found = i.skeleton()
        if found is None:
            raise MissingData(f"{i.name}: no skeleton (theta_sm and theta_cl)")
        skeleton = found
    return extend_skeleton(skeleton)


def extend_tensor(i: Instance, which: str, target: ExtendTarget = ExtendTarget.ETS_SKELETON) -> ETSData:
    """
    Extend one side's tensor skeleton (or core) to m on every pair.

    Raises:
        MissingData: If the side has no data of that kind
        NotInvertible: If m^cl cannot be recovered from a core
        ExtensionFailure: If the data does not extend
    """
    if target == ExtendTarget.ETC:
        core = i.ets_core(which)
        if core is None:
            raise MissingData(f"{i.name}: no tensor core on {which}")
        skeleton = ets_core_to_skeleton(core)
    else:
        found = i.ets_skeleton(which)
        if found is None:
            raise MissingData(f"{i.name}: no tensor skeleton on {which}")
        skeleton = found
    return extend_ets_skeleton(skeleton)


def full_morphism(i: Instance) -> Optional[FibMorphism]:
    """
    Declared θ, else the extension of the skeleton, else of the core.

    Raises:
        NotInvertible, ExtensionFailure: As for extend_morphism
    """
    declared = i.fib_morphism()
    if declared is not None:
        return declared
    if i.skeleton() is not None:
        return extend_morphism(i, ExtendTarget.SKELETON)
    if i.core() is not None:
        return extend_morphism(i, ExtendTarget.CORE)
    return None


def full_ets(i: Instance, which: str) -> Optional[ETSData]:
    """Declared m on one side, else the extension of its tensor skeleton or core."""
    declared = i.ets(which)
    if declared is not None:
        return declared
    if i.ets_skeleton(which) is not None:
        return extend_tensor(i, which, ExtendTarget.ETS_SKELETON)
    if i.ets_core(which) is not None:
        return extend_tensor(i, which, ExtendTarget.ETC)
    return None


def full_rho(i: Instance) -> Optional[Dict[Pair, NatTrans]]:
    """ρ indexed by object pairs; the skeleton form carries it twice."""
    r = i.rho
    if r is None:
        return None
    return r.rho if r.rho is not None else r.rho_sm


def full_mor_ets(i: Instance) -> Optional[MorETS]:
    """A morphism of tensor structures assembled from declared or extended parts."""
    rho = full_rho(i)
    sides = tensor_sides(i)
    if rho is None or not sides:
        return None
    morphism = full_morphism(i)
    first = full_ets(i, "source")
    second = full_ets(i, "target" if i.target is not None else "source")
    if morphism is None or first is None or second is None:
        return None
    return MorETS(morphism, first, second, rho)


def extended_instance(i: Instance, target: ExtendTarget) -> Instance:
    """
    The instance with the extended family written in next to the partial data.

    Raises:
        MissingData, NotInvertible, ExtensionFailure: As for the extensions
    """
    if target in (ExtendTarget.SKELETON, ExtendTarget.CORE):
        if i.morphism is None:
            raise MissingData(f"{i.name}: no morphism to extend")
        m = extend_morphism(i, target)
        logger.info(f"Extended {i.name} along {target.value}: {len(m.theta)} theta components")
        return replace(i, morphism=replace(i.morphism, theta=dict(m.theta)))

    sides = tensor_sides(i)
    if not sides:
        raise MissingData(f"{i.name}: no tensor structure to extend")
    tensors = dict(i.tensors)
    for which in sides:
        e = extend_tensor(i, which, target)
        tensors[which] = replace(tensors[which], m=dict(e.m))
        logger.info(f"Extended {i.name} box[{which}] along {target.value}: {len(e.m)} m components")
    rho = i.rho
    if rho is not None and rho.rho is None and rho.rho_sm is not None:
        rho = replace(rho, rho=dict(rho.rho_sm))
    return replace(i, tensors=tensors, rho=rho)
