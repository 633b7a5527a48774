"""Closed-form outage, capacity and scaling expressions."""

from .capacity import (
    CapacityResult,
    ScalingBound,
    baseline_outage,
    c1,
    fit_scaling_exponent,
    lambda_star_siso,
    primary_capacity,
    primary_outage_siso,
    scaling_bounds,
    secondary_outage_siso,
    success_laplace,
    transmission_capacity,
)

__all__ = [
    "CapacityResult",
    "ScalingBound",
    "baseline_outage",
    "c1",
    "fit_scaling_exponent",
    "lambda_star_siso",
    "primary_capacity",
    "primary_outage_siso",
    "scaling_bounds",
    "secondary_outage_siso",
    "success_laplace",
    "transmission_capacity",
]
