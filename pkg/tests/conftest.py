import pytest

from multilattice import Arrangement, FieldSpec, ResultCache
from multilattice.coxeter import coxeter_arrangement


@pytest.fixture(scope="session")
def B2():
    return coxeter_arrangement("B2")


@pytest.fixture(scope="session")
def G2():
    return coxeter_arrangement("G2")


@pytest.fixture(scope="session")
def boolean():
    return Arrangement.make(FieldSpec.rational(), [(1, 0), (0, 1)], names=["x", "y"])


@pytest.fixture(scope="session")
def session_cache():
    """Memory-only cache shared across a test session to amortize solves."""
    return ResultCache(use_env=False)
