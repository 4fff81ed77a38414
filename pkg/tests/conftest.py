import pytest

from orbifrob.frobenius import point_algebra, zn_algebra
from orbifrob.cocycles import FiniteGroupTable
from orbifrob.sympow import build


@pytest.fixture(scope="session")
def z2():
    return zn_algebra(2)


@pytest.fixture(scope="session")
def z3():
    return zn_algebra(3)


@pytest.fixture(scope="session")
def pt():
    return point_algebra()


@pytest.fixture(scope="session")
def s3_group():
    return FiniteGroupTable.symmetric(3)


@pytest.fixture(scope="session")
def s4_group():
    return FiniteGroupTable.symmetric(4)


@pytest.fixture(scope="session")
def sym_z2_2_p0(z2):
    return build(z2, 2, 0, verify=False)


@pytest.fixture(scope="session")
def sym_z2_3_p0(z2):
    return build(z2, 3, 0, verify=False)


@pytest.fixture(scope="session")
def sym_z2_3_p1(z2):
    return build(z2, 3, 1, verify=False)
