import numpy as np
import pytest

from difflmp.backend import available_backends, get_kernels


@pytest.fixture(params=available_backends())
def kernels(request):
    """Run a test once per installed kernel backend."""
    return get_kernels(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(20250817)
