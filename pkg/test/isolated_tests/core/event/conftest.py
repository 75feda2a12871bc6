import pytest

from entropygraph.core import (
    EventLogger,
)


@pytest.fixture(scope='function')
def event_logger(mock_pubsub):
    return EventLogger(mock_pubsub)
