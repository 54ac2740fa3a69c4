import numpy as np
import pytest

from subcomp.subspace import Subspace


def random_subspace(rng, ambient, dim):
    """Seeded Gaussian sample spanning a dim-dimensional subspace."""
    if dim == 0:
        return Subspace.zero(ambient)
    return Subspace.from_columns(rng.standard_normal((ambient, dim)))


def random_pair(rng, ambient, equal_dims=False):
    dm = int(rng.integers(0, ambient + 1))
    dn = dm if equal_dims else int(rng.integers(0, ambient + 1))
    return random_subspace(rng, ambient, dm), random_subspace(rng, ambient, dn)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
