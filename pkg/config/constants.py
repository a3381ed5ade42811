"""
Engine constants and enums.
"""
from enum import Enum, IntEnum


class Marked(str, Enum):
    """Marked subcategories of the base."""

    SMOOTH = "smooth"
    CLOSED = "closed"
    ALL = "all"


class Side(str, Enum):
    """Which adjoint an assignment supplies."""

    LEFT = "left"
    RIGHT = "right"


class Variance(str, Enum):
    """Direction of the functor attached to a base morphism."""

    INVERSE = "inverse"
    DIRECT = "direct"


class Suite(str, Enum):
    """Check suites selectable from the command line."""

    CATEGORY = "category"
    BASE = "base"
    FIBERED = "fibered"
    MORPHISM = "morphism"
    SKELETON = "skeleton"
    CORE = "core"
    ETS = "ets"
    ETS_SKELETON = "ets-skeleton"
    ETC = "etc"
    LOCALIC = "localic"
    COHERENCE = "coherence"
    ADJOINT = "adjoint"
    ALL = "all"


class ExtendTarget(str, Enum):
    """Structures that can be extended from partial data."""

    SKELETON = "skeleton"
    ETS_SKELETON = "ets-skeleton"
    CORE = "core"
    ETC = "etc"


class GenMode(str, Enum):
    """Corpus generation modes."""

    STRICT = "strict"
    TWIST = "twist"
    MUTATE = "mutate"


class ReportFormat(str, Enum):
    """Report output formats."""

    JSON = "json"
    TEXT = "text"


class ExitCode(IntEnum):
    """Process exit codes."""

    OK = 0
    CHECK_FAILED = 1
    INPUT_ERROR = 2


# Instance file format version
SCHEMA_VERSION = 1

# Joins the names of pair/triple components ("S1|S2", "f1|f2", "a|b")
PAIR_SEPARATOR = "|"

# Order in which suites run under --check all
SUITE_ORDER = (
    Suite.CATEGORY,
    Suite.BASE,
    Suite.FIBERED,
    Suite.MORPHISM,
    Suite.SKELETON,
    Suite.CORE,
    Suite.ETS,
    Suite.ETS_SKELETON,
    Suite.ETC,
    Suite.LOCALIC,
    Suite.ADJOINT,
    Suite.COHERENCE,
)

# Suites that --check all runs; localic and coherence are opt-in
DEFAULT_SUITES = tuple(s for s in SUITE_ORDER if s not in (Suite.LOCALIC, Suite.COHERENCE))

# Base blueprints: name -> (kind, size)
BASE_BLUEPRINTS = {
    "chain2": ("chain", 2),
    "chain3": ("chain", 3),
    "powerset2": ("powerset", 2),
    "powerset3": ("powerset", 3),
}

# Fiber blueprints: name -> (kind, description)
FIBER_BLUEPRINTS = {
    "bz2": ("group", "cyclic group of order 2"),
    "bz3": ("group", "cyclic group of order 3"),
    "bs3": ("group", "symmetric group on 3 letters"),
    "mon2": ("monoid", "two-element monoid {e, z} with z*z = z"),
    "chain2": ("poset", "two-element chain 0 <= 1"),
    "sheaf2": ("sheaf", "functions from points to the chain 0 <= 1"),
}

# Fibers whose tensor product is a bifunctor (commutative multiplication or meet)
TENSOR_FIBERS = ("bz2", "bz3", "mon2", "chain2", "sheaf2")

# Component families a mutation may address
MUTATION_FAMILIES = (
    "source.conn",
    "target.conn",
    "theta",
    "theta_sm",
    "theta_cl",
    "theta_cl_bar",
    "source.m",
    "source.m_sm",
    "source.m_cl",
    "source.m_cl_bar",
    "source.assoc",
    "source.comm",
    "rho",
)

# Markers used by the text report formatter
MARKS = {
    "pass": "✅",
    "fail": "❌",
    "skip": "⏭️",
    "note": "ℹ️",
    "error": "⚠️",
}

# Violations shown per suite in reports; the count is always exact
MAX_VIOLATIONS_SHOWN = 50
