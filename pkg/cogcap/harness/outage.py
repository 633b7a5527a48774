"""
Monte Carlo outage estimation.

Every trial is one independent realization under the typical-pair
convention; outage counts are exact integers summed over chunks, so the
estimate does not depend on the executor.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import structlog

from ..config import get_settings
from ..enums import OutageKind, Regime
from ..errors import CogcapError, ParameterError, SimulationError
from ..geometry.ppp import Region
from ..schemas.plan import TrialPlan
from ..schemas.scenario import ScenarioConfig
from ..sir.engine import outage_indicators
from ..sir.realization import realize
from .executor import TrialExecutor, get_executor
from .seeding import trial_rng
from .window import resolve_region

logger = structlog.get_logger()

Z_95 = 1.959963984540054


def wilson_interval(
    successes: int, trials: int, z: float = Z_95
) -> Tuple[float, float]:
    """Wilson score interval for a binomial proportion.

    Raises:
        ParameterError: If ``trials < 1`` or ``successes`` is out of range
    """
    if trials < 1:
        raise ParameterError(f"trials must be >= 1 (got {trials})")
    if not 0 <= successes <= trials:
        raise ParameterError(f"successes={successes} outside [0, {trials}]")
    p_hat = successes / trials
    z2 = z * z
    denominator = 1.0 + z2 / trials
    centre = (p_hat + z2 / (2.0 * trials)) / denominator
    spread = z * math.sqrt(p_hat * (1.0 - p_hat) / trials + z2 / (4.0 * trials**2))
    spread /= denominator
    low = max(0.0, min(p_hat, centre - spread))
    high = min(1.0, max(p_hat, centre + spread))
    return low, high


@dataclass(frozen=True)
class OutageEstimate:
    """Empirical outage probability with its 95% Wilson interval."""

    p_hat: float
    ci_low: float
    ci_high: float
    trials: int
    which: OutageKind
    outages: int = 0

    @classmethod
    def from_counts(cls, outages: int, trials: int, which: OutageKind) -> "OutageEstimate":
        low, high = wilson_interval(outages, trials)
        return cls(
            p_hat=outages / trials,
            ci_low=low,
            ci_high=high,
            trials=trials,
            which=OutageKind(which),
            outages=outages,
        )

    @property
    def half_width(self) -> float:
        return (self.ci_high - self.ci_low) / 2.0


@dataclass(frozen=True)
class OutageJob:
    """Everything a worker needs to run a slice of trials."""

    config: ScenarioConfig
    regime: Regime
    plan: TrialPlan
    region: Region
    dominating_lambda_s: Optional[float] = None


def count_outages(job: OutageJob, start: int, stop: int) -> Tuple[int, int]:
    """(primary outages, secondary outages) over trials ``start..stop-1``.

    Raises:
        SimulationError: Wrapping the first failing trial
    """
    primary = secondary = 0
    config = job.config
    for trial in range(start, stop):
        rng = trial_rng(job.plan.master_seed, trial)
        try:
            real = realize(
                config,
                job.region,
                rng,
                job.regime,
                channel_model=job.plan.channel_model,
                cancel_mode=job.plan.cancel_mode,
                dominating_lambda_s=job.dominating_lambda_s,
            )
            primary_out, secondary_out = outage_indicators(real)
        except CogcapError as exc:
            raise SimulationError(trial, exc) from exc
        primary += int(primary_out)
        secondary += int(secondary_out)
    return primary, secondary


@dataclass(frozen=True)
class OutageCounts:
    primary: int
    secondary: int
    trials: int

    def estimate(self, which: OutageKind) -> OutageEstimate:
        which = OutageKind(which)
        outages = self.secondary if which == OutageKind.SECONDARY else self.primary
        return OutageEstimate.from_counts(outages, self.trials, which)


def simulate_counts(
    config: ScenarioConfig,
    regime: Regime,
    plan: TrialPlan,
    *,
    region: Optional[Region] = None,
    dominating_lambda_s: Optional[float] = None,
    executor: Optional[TrialExecutor] = None,
) -> OutageCounts:
    """Run ``plan.trials`` trials and count outages at both typical receivers."""
    if region is None:
        region = resolve_region(
            config, plan, get_settings().max_region_radius, dominating_lambda_s
        )
    executor = executor or get_executor(plan.workers)
    job = OutageJob(
        config=config,
        regime=Regime(regime),
        plan=plan,
        region=region,
        dominating_lambda_s=dominating_lambda_s,
    )
    chunks = executor.map_chunks(functools.partial(count_outages, job), plan.trials)
    return OutageCounts(
        primary=sum(c[0] for c in chunks),
        secondary=sum(c[1] for c in chunks),
        trials=plan.trials,
    )


def estimate_outage(
    config: ScenarioConfig,
    regime: Regime,
    which: OutageKind,
    plan: TrialPlan,
    *,
    region: Optional[Region] = None,
    executor: Optional[TrialExecutor] = None,
) -> OutageEstimate:
    """Fraction of trials whose SIR falls below the threshold, with a Wilson CI.

    ``which=baseline`` evaluates the primary link with the secondary network
    absent whatever the regime.

    Raises:
        ParameterError: Secondary outage requested for the baseline regime
        SimulationError: A trial failed; carries its index
    """
    which = OutageKind(which)
    regime = Regime(regime)
    if which == OutageKind.BASELINE:
        regime = Regime.BASELINE
    elif which == OutageKind.SECONDARY and regime == Regime.BASELINE:
        raise ParameterError("the baseline regime has no secondary link")

    log = logger.bind(regime=regime.value, which=which.value, trials=plan.trials)
    counts = simulate_counts(config, regime, plan, region=region, executor=executor)
    estimate = counts.estimate(which)
    log.info(
        "outage_estimate_done",
        p_hat=estimate.p_hat,
        ci_low=estimate.ci_low,
        ci_high=estimate.ci_high,
    )
    return estimate
