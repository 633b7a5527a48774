"""
cogcap - transmission capacity of a cognitive (secondary) ad hoc network
sharing spectrum with a primary ad hoc network.
"""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("cogcap")
except PackageNotFoundError:  # pragma: no cover - source checkout
    __version__ = "0.1.0"

from .analytic import c1, lambda_star_siso, transmission_capacity
from .enums import CancelMode, ChannelModel, CrossPowerMode, Regime
from .harness import estimate_outage, max_intensity_search
from .schemas import ExperimentSpec, ScenarioConfig, TrialPlan

__all__ = [
    "CancelMode",
    "ChannelModel",
    "CrossPowerMode",
    "ExperimentSpec",
    "Regime",
    "ScenarioConfig",
    "TrialPlan",
    "__version__",
    "c1",
    "estimate_outage",
    "lambda_star_siso",
    "max_intensity_search",
    "transmission_capacity",
]
