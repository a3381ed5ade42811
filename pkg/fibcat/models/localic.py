"""
Adjoint data for the localic checks.
"""
from dataclasses import dataclass

from fibcat.models.adjoint import AdjointAssignment
from fibcat.models.fibered import FiberedCat


@dataclass(frozen=True, eq=False)
class LocalicData:
    """Left adjoints on smooth morphisms and right adjoints on closed ones; complements come from the base."""

    host: FiberedCat
    smooth_left: AdjointAssignment
    closed_right: AdjointAssignment
