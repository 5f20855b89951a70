"""Shared fixtures and hypothesis profiles."""

import os

import pytest
from hypothesis import HealthCheck, settings

from mbqaoa.core.config import Config, set_default_config
from mbqaoa.gates.circuits import QaoaParams
from mbqaoa.problems.mis import MisInstance
from mbqaoa.problems.qubo import QuboProblem, maxcut_to_qubo

settings.register_profile("default", max_examples=40, deadline=None)
settings.register_profile(
    "ci", max_examples=200, deadline=None, suppress_health_check=(HealthCheck.too_slow,)
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def pytest_configure(config: pytest.Config) -> None:
    config.addinivalue_line("markers", "slow: long parameter sweeps")


@pytest.fixture(autouse=True)
def fresh_config():
    """Each test starts from the default configuration."""
    set_default_config(None)
    yield
    set_default_config(None)


@pytest.fixture
def override_guards():
    """Install a config whose guards differ from the defaults."""

    def install(**guards: int) -> Config:
        config = Config()
        config.defaults = config.defaults.model_copy(
            update={"guards": config.guards.model_copy(update=guards)}
        )
        set_default_config(config)
        return config

    return install


@pytest.fixture
def k2() -> QuboProblem:
    return maxcut_to_qubo([(0, 1)], n=2)


@pytest.fixture
def p3() -> QuboProblem:
    return maxcut_to_qubo([(0, 1), (1, 2)], n=3)


@pytest.fixture
def k3() -> QuboProblem:
    return maxcut_to_qubo([(0, 1), (1, 2), (0, 2)], n=3)


@pytest.fixture
def qubo3() -> QuboProblem:
    """Couplings and fields of mixed sign on a path, plus an isolated-field vertex."""
    return QuboProblem.build(
        n=3,
        quadratic={(0, 1): 0.7, (1, 2): -1.3},
        linear={0: 0.4, 2: -0.9},
        constant=0.25,
        name="qubo3",
    )


@pytest.fixture
def params1() -> QaoaParams:
    return QaoaParams.of([0.37], [0.81])


@pytest.fixture
def params2() -> QaoaParams:
    return QaoaParams.of([0.37, 1.12], [0.81, -0.44])


@pytest.fixture
def triangle() -> MisInstance:
    return MisInstance.from_edges([(0, 1), (1, 2), (0, 2)], n=3, name="K3")


@pytest.fixture
def c5() -> MisInstance:
    return MisInstance.from_edges([(i, (i + 1) % 5) for i in range(5)], n=5, name="C5")
