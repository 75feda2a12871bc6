import pytest

from entropygraph.core import (
    ReplicaExecutor,
)


@pytest.fixture(scope='function')
def threaded_executor():
    return ReplicaExecutor(workers=4)


@pytest.fixture(scope='function')
def serial_executor():
    return ReplicaExecutor(workers=1)
