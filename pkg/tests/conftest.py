import pytest

from corridor_equilibrium.instances import worked_example_config
from corridor_equilibrium.scenarios import run_all


@pytest.fixture(scope="session")
def example_cfg():
    return worked_example_config()


@pytest.fixture(scope="session")
def merged_reports(example_cfg):
    return run_all(example_cfg, "merged_formula")


@pytest.fixture(scope="session")
def exact_reports(example_cfg):
    return run_all(example_cfg, "exact")
