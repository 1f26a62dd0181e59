import numpy as np
import pytest


def random_complex(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_well_conditioned(rng, n, kappa=50.0):
    """Seeded invertible matrix with condition number exactly kappa."""
    q1, _ = np.linalg.qr(random_complex(rng, n, n))
    q2, _ = np.linalg.qr(random_complex(rng, n, n))
    s = np.geomspace(1.0, kappa, n)
    return (q1 * s) @ q2


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
