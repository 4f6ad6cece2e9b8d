import random

import pytest

from congruences import Config


@pytest.fixture
def config():
    return Config(seed=11)


@pytest.fixture
def rng():
    return random.Random(20240917)


def on_twisted_cubic(x):
    """x lies on (1, u, u^2, u^3) iff the 2x3 Hankel matrix has rank <= 1."""
    rows = ((x[0], x[1], x[2]), (x[1], x[2], x[3]))
    return all(rows[0][i] * rows[1][j] == rows[0][j] * rows[1][i]
               for i in range(3) for j in range(i + 1, 3))
