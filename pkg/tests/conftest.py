import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from torex import fixtures as fx


@pytest.fixture(scope="session")
def tg33():
    return fx.toroidal_grid(3, 3)


@pytest.fixture(scope="session")
def tg35():
    return fx.toroidal_grid(3, 5)


@pytest.fixture(scope="session")
def tg46():
    return fx.toroidal_grid(4, 6)


@pytest.fixture(scope="session")
def one_vertex_torus():
    return fx.one_vertex_torus()


@pytest.fixture(scope="session")
def genus2_join():
    return fx.join(fx.toroidal_grid(3, 4), fx.toroidal_grid(3, 5))


def random_pool(seed: int, count: int, max_edges: int = 12, min_genus: int = 1):
    rng = random.Random(seed)
    return [fx.random_embedding(rng, max_edges=max_edges, min_genus=min_genus)
            for _ in range(count)]
