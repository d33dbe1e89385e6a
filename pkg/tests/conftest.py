import numpy as np
import pytest

from fourway import _kernels_py
from fourway.core import SystemConfig, TrafficProfile

try:
    from fourway import _kernels as _kernels_c
except ImportError:  # extension not built
    _kernels_c = None

SYM = SystemConfig()
ONE = TrafficProfile(1.0, 1.0)

BACKENDS = [pytest.param(_kernels_py, id="python"),
            pytest.param(_kernels_c, id="cython",
                         marks=pytest.mark.skipif(_kernels_c is None,
                                                  reason="compiled kernels not built"))]


@pytest.fixture(params=BACKENDS)
def kernel_impl(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_config(rng, zero_prob=0.0):
    """Gains in [0.05, 2], powers in [1, 20], occasionally a dead link."""
    gains = rng.uniform(0.05, 2.0, 4)
    if zero_prob:
        gains[rng.random(4) < zero_prob] = 0.0
    powers = rng.uniform(1.0, 20.0, 5)
    return SystemConfig(*gains, *powers)
