import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def _backends():
    from abclll import _pykernel

    mods = [pytest.param(_pykernel, id="python")]
    try:
        from abclll import _ckernel
    except ImportError:
        mods.append(pytest.param(None, id="cython", marks=pytest.mark.skip("extension not built")))
    else:
        mods.append(pytest.param(_ckernel, id="cython"))
    return mods


@pytest.fixture(params=_backends())
def kernel(request):
    return request.param
