import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", parent=settings.get_profile("default"), max_examples=200)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

from qstrat.backend import BackendModel, resolve_backend  # noqa: E402
from qstrat.dataset import example_dataset  # noqa: E402


@pytest.fixture(scope="session")
def ring5() -> BackendModel:
    return resolve_backend("fake:generic:5")


@pytest.fixture(scope="session")
def examples():
    return example_dataset()

