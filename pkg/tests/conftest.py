import numpy as np
import pytest

from fgnls import derive_modes, partition, riemann_matrix
from fgnls.presets import four_modes, one_mode, six_modes, three_modes


class Setup:
    def __init__(self, data):
        self.data = data
        self.modes = derive_modes(data)
        self.rd = riemann_matrix(self.modes, data.epsilon)
        self.part = partition(self.rd, data.T0, data.p)


@pytest.fixture(scope="session")
def one():
    return Setup(one_mode())


@pytest.fixture(scope="session")
def three():
    return Setup(three_modes())


@pytest.fixture(scope="session")
def four():
    return Setup(four_modes())


@pytest.fixture(scope="session")
def six():
    return Setup(six_modes())


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
