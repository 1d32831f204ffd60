import numpy as np
import pytest

from sleeping_top.potential import PotentialW


@pytest.fixture
def lagrange():
    return PotentialW.lagrange()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_polys(n, seed=7, degree=4):
    rng = np.random.default_rng(seed)
    return [PotentialW.polynomial(rng.uniform(-1, 1, degree + 1)) for _ in range(n)]


BUILTINS = [PotentialW.lagrange(), PotentialW.kirchhoff(0.5), PotentialW.kirchhoff(2.0),
            PotentialW.polynomial([3, -2, 5])]
