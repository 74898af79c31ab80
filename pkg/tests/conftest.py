import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240229)


def random_complex(rng, n, scale=None):
    scale = 1 / np.sqrt(n) if scale is None else scale
    return scale * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))


def expand(roots):
    """Ascending coefficients of prod (z - r)."""
    return np.polynomial.polynomial.polyfromroots(roots)
