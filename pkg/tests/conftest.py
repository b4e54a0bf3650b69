import pytest
from hypothesis import HealthCheck, settings

import fuzzfrac as ff

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def ex2_config():
    return ff.example_config()


@pytest.fixture(scope="session")
def ex2_spec(ex2_config):
    return ex2_config.build()


@pytest.fixture(scope="session")
def ex2_solution(ex2_spec):
    """Example solved at the default density; shared across tests."""
    phi, report = ff.solve(ex2_spec, grid_density=64, tol=1e-8)
    return phi, report


@pytest.fixture(scope="session")
def ex2_hp(ex2_spec):
    return ff.holder_params(ex2_spec)
