import pytest

from catbench.registry import EvalConfig, default_registry
from catbench.semantics import TestBudget


@pytest.fixture(scope="session")
def reg():
    return default_registry()


@pytest.fixture
def cfg():
    return EvalConfig()


@pytest.fixture
def pcfg():
    return EvalConfig(mode="par")


@pytest.fixture
def budget():
    return TestBudget(samples=8)
