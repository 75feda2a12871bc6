import pytest

from entropygraph.core import (
    EnumeratedLaw,
    IndependentEdgeLaw,
)


@pytest.fixture(scope='function')
def tilde_law(cycle_solution):
    return IndependentEdgeLaw(cycle_solution)


@pytest.fixture(scope='function')
def uniform_law(cycle_degrees):
    return EnumeratedLaw.given_degrees(cycle_degrees)
