import pytest

from entropygraph.core import (
    LabeledTree,
    OrderedTree,
    SimpleGraph,
)


@pytest.fixture(scope='function')
def path3():
    return LabeledTree(3, [(0, 1), (1, 2)])


@pytest.fixture(scope='function')
def star4():
    return LabeledTree(4, [(0, 1), (0, 2), (0, 3)])


@pytest.fixture(scope='function')
def worked_path(path3):
    # 8 - 7 - 5 in 1-based vertex names
    return OrderedTree(path3, (7, 6, 4))


@pytest.fixture(scope='function')
def square():
    return SimpleGraph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])


@pytest.fixture(scope='function')
def triangle():
    return SimpleGraph(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture(scope='function')
def petersen():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return SimpleGraph(10, outer + spokes + inner)
