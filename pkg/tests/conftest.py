"""Test configuration and shared fixtures.

Settings are rebuilt from a clean environment for every test so that
``COGCAP_*`` variables on the developer machine never leak into results.
"""

import os

import numpy as np
import pytest
import structlog

from cogcap import config as config_module
from cogcap.geometry.ppp import Region
from cogcap.schemas.plan import TrialPlan
from cogcap.schemas.scenario import ScenarioConfig

COGCAP_ENV = (
    "COGCAP_SEED",
    "COGCAP_WORKERS",
    "COGCAP_DEFAULT_TRIALS",
    "COGCAP_MAX_REGION_RADIUS",
    "COGCAP_RESULTS_ROOT",
    "COGCAP_RECORD_WALL_TIME",
)


@pytest.fixture(autouse=True)
def clean_settings(monkeypatch, tmp_path):
    """Fresh settings with results written under the test's tmp dir."""
    for name in COGCAP_ENV:
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setenv("COGCAP_RESULTS_ROOT", str(tmp_path / "results"))
    monkeypatch.chdir(tmp_path)
    config_module.reset_settings()
    yield config_module.get_settings()
    for name in COGCAP_ENV:
        os.environ.pop(name, None)
    config_module.reset_settings()
    structlog.reset_defaults()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def preset() -> ScenarioConfig:
    """Reference scenario: alpha=3, d=1 m, P_p/P_s=2, beta=1, lambda_p=0.01."""
    return ScenarioConfig.reference_preset()


@pytest.fixture
def region() -> Region:
    return Region(radius=30.0)


@pytest.fixture
def small_plan() -> TrialPlan:
    """A small plan for smoke-level Monte Carlo tests."""
    return TrialPlan(trials=200, master_seed=7, region_radius=30.0)
