import numpy as np
import pytest

from overlapfree.constants import load
from overlapfree.products import default_family


@pytest.fixture(scope="session")
def data():
    return load()


@pytest.fixture(scope="session")
def family():
    return default_family()


@pytest.fixture
def rng():
    return np.random.default_rng(20260)
