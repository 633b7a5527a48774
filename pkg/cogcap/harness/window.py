"""
Sampling-window sizing.

The model lives on the infinite plane; simulations sample a disc large
enough that the interference expected from beyond it is at most a fraction
``eta`` of the interference expected inside it beyond the mean
nearest-interferer distance ``r0 = 1 / (2 sqrt(lambda))``.
"""

from __future__ import annotations

from typing import Optional

import structlog

from ..errors import ParameterError
from ..geometry.ppp import Region
from ..schemas.plan import TrialPlan
from ..schemas.scenario import ScenarioConfig

logger = structlog.get_logger()


def auto_region_radius(
    config: ScenarioConfig,
    eta: float,
    cap: float,
    lambda_s: Optional[float] = None,
) -> float:
    """Smallest radius whose truncated tail is within ``eta`` of the kept interference.

    ``R = r0 * ((1 + eta) / eta) ** (1 / (alpha - 2))``, raised to at least
    twice the longest link and capped at ``cap``.

    Args:
        config: Scenario (intensities, link distances, alpha)
        eta: Truncation tolerance in (0, 0.1]
        cap: Largest admissible radius (m)
        lambda_s: Secondary intensity to size for (default ``config.lambda_s``)

    Raises:
        ParameterError: If the cap cannot contain the typical links
    """
    if not 0 < eta <= 0.1:
        raise ParameterError(f"truncation tolerance must be in (0, 0.1] (got {eta})")
    longest_link = max(config.d_p, config.d_s)
    if cap <= longest_link:
        raise ParameterError(
            f"region cap {cap} m cannot contain a {longest_link} m link"
        )

    total = config.lambda_p + (config.lambda_s if lambda_s is None else lambda_s)
    floor = 2.0 * longest_link
    if total <= 0:
        return min(floor, cap)

    r0 = 1.0 / (2.0 * total**0.5)
    radius = r0 * ((1.0 + eta) / eta) ** (1.0 / (config.alpha - 2.0))
    radius = min(max(radius, floor), cap)
    logger.debug("region_auto_sized", radius=radius, intensity=total, eta=eta)
    return radius


def resolve_region(
    config: ScenarioConfig,
    plan: TrialPlan,
    cap: float,
    lambda_s: Optional[float] = None,
) -> Region:
    """The plan's fixed region, or an auto-sized one."""
    if plan.region_radius is not None:
        if plan.region_radius <= max(config.d_p, config.d_s):
            raise ParameterError(
                f"region radius {plan.region_radius} m is shorter than a link"
            )
        return Region(radius=plan.region_radius)
    return Region(
        radius=auto_region_radius(config, plan.truncation_tolerance, cap, lambda_s)
    )
