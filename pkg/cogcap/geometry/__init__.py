"""Poisson point process sampling, thinning, pairing and nearest-neighbor queries."""

from .ppp import (
    AccessConfig,
    NearestResult,
    PointSample,
    Region,
    displace_receivers,
    nearest,
    sample_ppp,
    superpose,
    thin,
    thin_with_mask,
)

__all__ = [
    "AccessConfig",
    "NearestResult",
    "PointSample",
    "Region",
    "displace_receivers",
    "nearest",
    "sample_ppp",
    "superpose",
    "thin",
    "thin_with_mask",
]
