import pytest

from umbral_flow.carlitz import CarlitzCtx
from umbral_flow.fq import field


@pytest.fixture(scope="session")
def F2():
    return field(2)


@pytest.fixture(scope="session")
def F3():
    return field(3)


@pytest.fixture(scope="session")
def F4():
    return field(2, 2, (1, 1, 1))


@pytest.fixture(scope="session")
def cc2(F2):
    return CarlitzCtx(F2)


@pytest.fixture(scope="session")
def cc3(F3):
    return CarlitzCtx(F3)


@pytest.fixture(scope="session")
def cc4(F4):
    return CarlitzCtx(F4)
