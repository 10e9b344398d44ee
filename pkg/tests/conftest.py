import pytest

from ttgeo import suites


@pytest.fixture(scope="session")
def res():
    """One Resources cache for the whole run; balls and fiber maps are
    expensive and every module certifies against the same objects."""
    return suites.Resources()


@pytest.fixture(scope="session")
def ball11(res):
    return res.ball("s11", 8)


@pytest.fixture(scope="session")
def ball04(res):
    return res.ball("s04", 8)
