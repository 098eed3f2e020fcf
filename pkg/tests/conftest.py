import numpy as np
import pytest

from twistor4.catalog import CATALOG
from twistor4.geometry import FieldGrid


@pytest.fixture
def rng():
    return np.random.default_rng(20250810)


@pytest.fixture(scope="session")
def grids():
    """Session-wide FieldGrid cache keyed by (surface name, n)."""
    cache = {}

    def get(name, n):
        key = (name, n)
        if key not in cache:
            cache[key] = FieldGrid(CATALOG[name].surface, n)
        return cache[key]

    return get
