import pytest

from classical_drg.params import spectral_table
from classical_drg.settings import set_global_config
from tests.utils import build_cp, get_fixtures_data, random_tables


@pytest.fixture(autouse=True)
def reset_global_config():
    set_global_config(None)
    yield
    set_global_config(None)


@pytest.fixture(scope="session")
def get_fixtures_by_name(fixtures_data):
    def _get_fixtures(name: str):
        return fixtures_data[name]

    return _get_fixtures


@pytest.fixture(scope="session")
def fixtures_data():
    return get_fixtures_data()


@pytest.fixture(scope="session")
def instances(get_fixtures_by_name):
    return get_fixtures_by_name("instances")


@pytest.fixture(scope="session")
def grassmann_cp(instances):
    """J_2(4,2)"""
    return build_cp(instances["grassmann_2_4_2"])


@pytest.fixture(scope="session")
def grassmann_st(grassmann_cp):
    return spectral_table(grassmann_cp)


@pytest.fixture(scope="session")
def bilinear_cp(instances):
    """Bil(2x2, 2)"""
    return build_cp(instances["bilinear_2_2_2"])


@pytest.fixture(scope="session")
def random_parameter_sets():
    return random_tables(50, seed=20)
