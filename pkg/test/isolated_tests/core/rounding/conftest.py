import pytest

from entropygraph.core import (
    WeightedBipartiteGraph,
)


@pytest.fixture(scope='function')
def worked_weights():
    # A = {0, 1, 2, 3}, B = {4, 5, 6}
    return WeightedBipartiteGraph(7, range(4), [(0, 4, 0.5), (2, 4, 0.6), (2, 5, 0.8),
                                                (0, 5, 0.2), (2, 6, 0.9), (1, 6, 0.5),
                                                (3, 5, 0.3)])


@pytest.fixture(scope='function')
def square_weights():
    return WeightedBipartiteGraph(4, [0, 1], {(0, 2): 0.5, (0, 3): 0.5,
                                              (1, 2): 0.5, (1, 3): 0.5})
