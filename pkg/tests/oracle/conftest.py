import pytest

from classical_drg.oracle.graphs import build_bilinear, build_grassmann


@pytest.fixture(scope="session")
def grassmann_graph():
    """J_2(4,2) built from the subspaces of F_2^4"""
    return build_grassmann(2, 4, 2)


@pytest.fixture(scope="session")
def bilinear_graph():
    return build_bilinear(2, 2, 2)
