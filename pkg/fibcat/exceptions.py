"""
Exception hierarchy for the engine.

Input problems (bad files, dangling references, malformed blueprints) and
structural refusals (no pullback, non-invertible transposes) are raised;
failing laws are reported, never raised.
"""
from typing import Any, Optional, Sequence


class FibcatError(Exception):
    """Base class for all engine errors."""


class DanglingId(FibcatError):
    """A table references an undeclared object or morphism."""

    def __init__(self, kind: str, name: object, where: str = "") -> None:
        self.kind = kind
        self.name = name
        self.where = where
        location = f" in {where}" if where else ""
        super().__init__(f"Undeclared {kind} {name!r}{location}")


class CompositionUndefined(FibcatError):
    """A composite was requested for a non-composable pair."""


class SourceInvalid(FibcatError):
    """A functor's source or target category fails validation."""


class BoundaryMismatch(FibcatError):
    """Functors or components do not share the required boundary."""


class NotIso(FibcatError):
    """A component that must be invertible has no inverse."""

    def __init__(self, message: str, witness: Optional[str] = None) -> None:
        self.witness = witness
        super().__init__(message)


class PastingTypeError(FibcatError, TypeError):
    """A pasting term step does not chain with its predecessor."""

    def __init__(self, message: str, step: Optional[int] = None) -> None:
        self.step = step
        super().__init__(message)


class NoPullback(FibcatError):
    """No cone over a cospan is universal."""


class MissingComplement(FibcatError):
    """A closed morphism has no declared open complement."""


class Disconnected(FibcatError):
    """A factorization category is not connected."""

    def __init__(self, message: str, components: Sequence[Sequence[Any]]) -> None:
        self.components = [list(c) for c in components]
        super().__init__(message)


class NotFound(FibcatError):
    """A universal property has no witness."""


class NotUnique(FibcatError):
    """A universal property has more than one witness."""


class SquareNotCommuting(FibcatError):
    """A square supplied as commutative does not commute in the base."""


class MissingData(FibcatError):
    """A family needed by an operation is absent from the instance."""


class ExtensionFailure(FibcatError):
    """Partial data does not extend; carries the failing report."""

    def __init__(self, message: str, report: Any = None) -> None:
        self.report = report
        super().__init__(message)


class IndependenceFailure(ExtensionFailure):
    """Two factorizations of one morphism give different values."""


class CompositionFailure(ExtensionFailure):
    """The assembled family fails its composition axiom."""


class NotInvertible(FibcatError):
    """A transposed transformation is not invertible."""

    def __init__(self, message: str, witness: Optional[Sequence[str]] = None) -> None:
        self.witness = tuple(witness or ())
        super().__init__(message)


class AddressInvalid(FibcatError):
    """A mutation address does not name an existing component."""


class ParseError(FibcatError):
    """An instance file cannot be read; carries the field path."""

    def __init__(self, message: str, path: str = "") -> None:
        self.path = path
        prefix = f"{path}: " if path else ""
        super().__init__(f"{prefix}{message}")


class BadBlueprint(FibcatError):
    """An unknown or incompatible generator blueprint was requested."""
