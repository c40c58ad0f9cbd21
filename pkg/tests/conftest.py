import os

import pytest
from hypothesis import HealthCheck, settings

from pnaive.models import FreeGroup, FreeProduct

settings.register_profile(
    "pnaive", max_examples=int(os.environ.get("PNAIVE_HYPOTHESIS_EXAMPLES", "60")), deadline=None,
    suppress_health_check=[HealthCheck.too_slow], derandomize=True,
)
settings.load_profile("pnaive")


@pytest.fixture(scope="session")
def F2():
    return FreeGroup(2)


@pytest.fixture(scope="session")
def Z2Z3():
    return FreeProduct((2, 3))
