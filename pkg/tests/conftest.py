import sys

import numpy as np
import pytest
from hypothesis import settings

from bookramsey import ColoredCompleteGraph, _backend

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

sys.path.insert(0, __file__.rsplit("/", 1)[0])


BACKENDS = sorted(_backend.available().items())
by_backend = pytest.mark.parametrize("kernels", [k for _, k in BACKENDS],
                                     ids=[name for name, _ in BACKENDS])


def random_graph(rng, n, p=0.5):
    a = np.triu(rng.random((n, n)) < p, 1)
    return ColoredCompleteGraph(a | a.T)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
