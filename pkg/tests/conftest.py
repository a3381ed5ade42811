"""
Shared pytest configuration and fixtures.
"""
import pytest
import sys
from pathlib import Path

# Add project root to Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))


@pytest.fixture(scope="session")
def test_settings():
    """Engine settings."""
    from config import settings
    return settings


@pytest.fixture(scope="session")
def chain2():
    """The chain 0 <= 1 with everything marked."""
    from fibcat.services.base import chain_base
    return chain_base(2)


@pytest.fixture(scope="session")
def chain3():
    """The chain 0 <= 1 <= 2 with everything marked."""
    from fibcat.services.base import chain_base
    return chain_base(3)


@pytest.fixture(scope="session")
def powerset2():
    """Subsets of {1, 2} under inclusion."""
    from fibcat.services.base import powerset_base
    return powerset_base(2)


@pytest.fixture(scope="session")
def bz3():
    """The cyclic group of order 3 as a one-object category."""
    from fibcat.services.generators import fiber_category
    return fiber_category("bz3")


@pytest.fixture(scope="session")
def strict_group(powerset2):
    """Strict instance with constant BZ/3 fibers over powerset2."""
    from fibcat.services.generators import strict_presheaf_instance
    return strict_presheaf_instance(powerset2, "bz3")


@pytest.fixture(scope="session")
def strict_thin(chain2):
    """Strict instance with constant 2-chain fibers over chain2."""
    from fibcat.services.generators import strict_presheaf_instance
    return strict_presheaf_instance(chain2, "chain2")


@pytest.fixture(scope="session")
def twisted_full():
    """Twisted BZ/3 instance over chain2 keeping every family."""
    from fibcat.services.generators import twisted_instance
    return twisted_instance("chain2", "bz3", 11, keep_full=True)


@pytest.fixture(scope="session")
def twisted():
    """Twisted BZ/3 instance over chain2 with only skeleta, cores and the oracle."""
    from fibcat.services.generators import twisted_instance
    return twisted_instance("chain2", "bz3", 11)


@pytest.fixture
def runner():
    """Single-worker suite runner."""
    from fibcat.services.suites import SuiteRunner
    return SuiteRunner(threads=1)
