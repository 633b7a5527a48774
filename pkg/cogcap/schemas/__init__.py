"""Pydantic models for scenarios, trial plans and experiments."""

from .experiment import FIGURES, ExperimentSpec, SweepAxis
from .plan import DEFAULT_MASTER_SEED, TrialPlan
from .scenario import ScenarioConfig

__all__ = [
    "DEFAULT_MASTER_SEED",
    "ExperimentSpec",
    "FIGURES",
    "ScenarioConfig",
    "SweepAxis",
    "TrialPlan",
]
