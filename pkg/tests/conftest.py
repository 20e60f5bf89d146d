import pytest

from ikernel.actions import build_cusp_instance, build_instance
from ikernel.algebra import y_positive_monomial_algebra


@pytest.fixture(scope="session")
def inst11():
    return build_instance(1, 1)


@pytest.fixture(scope="session")
def inst12():
    return build_instance(1, 2)


@pytest.fixture(scope="session")
def inst21():
    return build_instance(2, 1)


@pytest.fixture(scope="session")
def inst22():
    return build_instance(2, 2)


@pytest.fixture(scope="session")
def mono11(inst11):
    return y_positive_monomial_algebra(
        inst11.varsys, inst11.x_names, inst11.y_names, 10
    )


@pytest.fixture(scope="session")
def mono21(inst21):
    return y_positive_monomial_algebra(
        inst21.varsys, inst21.x_names, inst21.y_names, 8
    )


@pytest.fixture(scope="session")
def cusp():
    return build_cusp_instance()
