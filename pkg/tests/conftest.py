import pytest

from fakeelliptic import AlgebraParams, saturate, standard_order


@pytest.fixture(scope="session")
def params():
    return AlgebraParams(3, -1)


@pytest.fixture(scope="session")
def std_order(params):
    return standard_order(params)


@pytest.fixture(scope="session")
def max_order(std_order):
    return saturate(std_order)
