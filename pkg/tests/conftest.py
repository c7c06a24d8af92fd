"""Shared fixtures for the charflow test suite."""

import logging

import numpy as np
import pytest

from charflow.modules.catalog.services.catalog_service import get
from charflow.modules.report.tolerances import TolerancePolicy


@pytest.fixture(autouse=True)
def quiet_logs(caplog):
    caplog.set_level(logging.WARNING, logger="charflow")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def policy():
    return TolerancePolicy()


@pytest.fixture(scope="session")
def bilinear():
    return get("bilinear")


@pytest.fixture(scope="session")
def radial():
    return get("radial")


@pytest.fixture(scope="session")
def example32():
    return get("example32")


@pytest.fixture(scope="session")
def lipschitz_xy():
    return get("lipschitz_xy")
