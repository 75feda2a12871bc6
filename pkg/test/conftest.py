import logging

import numpy as np
import pytest

from entropygraph.core import (
    DegreeSequence,
    Settings,
    UniformBernoulliModel,
    solve_max_entropy,
)
from entropygraph.core.conf.settings import DEFAULT_SETTINGS_FILE

from .doubles import (
    MockPubSub,
)

# -----------------------------------------------------------------------------
# Core Fixtures
# -----------------------------------------------------------------------------


@pytest.fixture(autouse=True)
def restore_package_logger():
    """load_logconfig stops propagation; undo it so caplog keeps working"""
    yield
    package_logger = logging.getLogger('entropygraph')
    package_logger.handlers = []
    package_logger.propagate = True
    package_logger.setLevel(logging.NOTSET)


@pytest.fixture(scope='function')
def settings():
    return Settings(DEFAULT_SETTINGS_FILE)


@pytest.fixture(scope='function')
def rng():
    return np.random.default_rng(20160601)


@pytest.fixture(scope='function')
def mock_pubsub():
    return MockPubSub()


@pytest.fixture(scope='session')
def event_bus():
    from entropygraph.core import event_bus as eventbus
    return eventbus


@pytest.fixture(scope='function')
def cycle_degrees():
    return DegreeSequence([2, 2, 2, 2])


@pytest.fixture(scope='function')
def matching_degrees():
    return DegreeSequence([1, 1, 1, 1])


@pytest.fixture(scope='function')
def worked_degrees():
    return DegreeSequence([3, 1, 2, 1, 3, 3, 4, 3])


@pytest.fixture(scope='function')
def cubic_degrees():
    return DegreeSequence([3] * 8)


@pytest.fixture(scope='function')
def mixed_degrees():
    return DegreeSequence([1, 2, 2, 3, 3, 4, 4, 5])


@pytest.fixture(scope='function')
def cycle_solution(cycle_degrees):
    return solve_max_entropy(cycle_degrees)


@pytest.fixture(scope='function')
def cubic_solution(cubic_degrees):
    return solve_max_entropy(cubic_degrees)


@pytest.fixture(scope='function')
def uniform_model():
    return UniformBernoulliModel(20, 0.3)
