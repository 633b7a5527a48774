"""Deployment realizations and SIR evaluation at the typical receivers."""

from .engine import (
    SirOutcome,
    canceled_count,
    outage_indicators,
    sir_baseline,
    sir_from_components,
    sir_primary,
    sir_secondary,
)
from .realization import (
    ChannelDraw,
    DeploymentRealization,
    cancelation_set,
    nulling_targets_for,
    realize,
)

__all__ = [
    "ChannelDraw",
    "DeploymentRealization",
    "SirOutcome",
    "cancelation_set",
    "canceled_count",
    "nulling_targets_for",
    "outage_indicators",
    "realize",
    "sir_baseline",
    "sir_from_components",
    "sir_primary",
    "sir_secondary",
]
