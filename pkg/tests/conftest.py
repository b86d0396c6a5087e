import numpy as np
import pytest

from nhskin import zoo
from nhskin.spectral import obc_spectrum


@pytest.fixture(scope="session")
def obc_cache():
    """One OBC diagonalization per (zoo id, overrides, sizes), shared suite-wide."""
    cache = {}

    def get(model_id, sizes=None, **overrides):
        model = zoo.build(model_id, **overrides)
        if sizes is None:
            sizes = (40,) * model.dimension
        key = (model_id, tuple(sorted(overrides.items())), tuple(sizes))
        if key not in cache:
            cache[key] = obc_spectrum(model, sizes)
        return cache[key]

    return get


def nearest(eigenvalues, target):
    """Index of the eigenvalue closest to ``target``."""
    return int(np.argmin(np.abs(np.asarray(eigenvalues) - target)))
