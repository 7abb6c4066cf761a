import pytest

from icetors.catalog import enumerate_indecomposables
from icetors.quiver import builtin


@pytest.fixture(scope="session")
def a2():
    return enumerate_indecomposables(builtin("lineA:2"))


@pytest.fixture(scope="session")
def a3():
    return enumerate_indecomposables(builtin("lineA:3"))


@pytest.fixture(scope="session")
def lam():
    return enumerate_indecomposables(builtin("paperNakayama"))
