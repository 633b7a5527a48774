"""
Statistical validation of the model's distributional building blocks.

Checks:
- Nulling beamformer gain is Gamma(N-k, 1); gain toward a fresh receiver is Exp(1)
- Cancelation combiner gain is Gamma(M-m, 1); cross gains stay Exp(1)
- Nulling and cancelation residuals vanish to numerical precision
- Two power classes of interferers equal one unit-power PPP of scaled intensity
  (with a half-intensity negative control that must be rejected)
- Power marks drawn per point equal two separate networks
- Secondary-free primary outage matches its closed form
- Single-antenna primary and secondary outages match their closed forms

Verdict Logic:
- FAIL: Any check failed
- PASS: All checks passed
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import structlog
from scipy import stats

from ..analytic.capacity import (
    baseline_outage,
    primary_outage_siso,
    secondary_outage_siso,
)
from ..channel.mimo import beamformers_for_targets, draw_gaussian
from ..config import get_settings
from ..enums import CancelMode, ChannelModel, OutageKind, Regime
from ..errors import ParameterError
from ..geometry.ppp import Region
from ..schemas.plan import TrialPlan
from ..schemas.scenario import ScenarioConfig
from ..sir.engine import canceled_count
from ..sir.realization import realize
from .outage import OutageEstimate, estimate_outage, simulate_counts
from .seeding import trial_rng
from .window import resolve_region

logger = structlog.get_logger()

SIGNIFICANCE = 0.01
RESIDUAL_LIMIT = 1e-8
VALIDATION_RADIUS = 50.0
BASELINE_ABSOLUTE_TOLERANCE = 0.005

# Stream ids keep validation draws apart from outage trials
_STREAM_NULLING = 11
_STREAM_COMBINING = 12
_STREAM_TWO_NETWORK = 13
_STREAM_SINGLE = 14
_STREAM_CONTROL = 15
_STREAM_MARKS = 16


@dataclass
class CheckResult:
    """Result of a single validation check."""

    name: str
    passed: bool
    statistic: Optional[float] = None
    p_value: Optional[float] = None
    detail: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "statistic": self.statistic,
            "p_value": self.p_value,
            "detail": self.detail,
        }


@dataclass
class ValidationReport:
    """Collection of checks with an overall verdict."""

    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    @property
    def checks_failed(self) -> int:
        return sum(1 for check in self.checks if not check.passed)

    def extend(self, other: "ValidationReport") -> "ValidationReport":
        self.checks.extend(other.checks)
        return self

    def to_dict(self) -> Dict[str, Any]:
        return {
            "verdict": self.verdict,
            "checks_passed": len(self.checks) - self.checks_failed,
            "checks_failed": self.checks_failed,
            "checks": [check.to_dict() for check in self.checks],
        }


def _ks_fit(name: str, samples: np.ndarray, cdf: Any) -> CheckResult:
    result = stats.kstest(samples, cdf)
    return CheckResult(
        name=name,
        passed=bool(result.pvalue > SIGNIFICANCE),
        statistic=float(result.statistic),
        p_value=float(result.pvalue),
    )


def _residual_check(name: str, residuals: np.ndarray) -> CheckResult:
    worst = float(residuals.max()) if residuals.size else 0.0
    return CheckResult(
        name=name,
        passed=worst < RESIDUAL_LIMIT,
        statistic=worst,
        detail=f"max residual {worst:.3e} over {residuals.size} constraints",
    )


def check_nulling(
    N: int, k: int, samples: int, master_seed: int
) -> ValidationReport:
    """Beamformer gain law, cross gain law and nulling residuals."""
    if not 0 <= k < N:
        raise ParameterError(f"need 0 <= k < N (got k={k}, N={N})")
    rng = trial_rng(master_seed, 0, _STREAM_NULLING)
    targets = draw_gaussian((samples, k, N), rng)
    own = draw_gaussian((samples, N), rng)
    beamformers, gains = beamformers_for_targets(targets, own)
    fresh = draw_gaussian((samples, N), rng)
    cross = np.abs(np.einsum("bi,bi->b", fresh, beamformers)) ** 2
    residuals = np.abs(np.einsum("bki,bi->bk", targets, beamformers)).ravel()
    return ValidationReport(
        [
            _ks_fit(f"nulling_gain_gamma_{N - k}", gains, stats.gamma(N - k).cdf),
            _ks_fit("nulling_cross_gain_exp", cross, stats.expon().cdf),
            _residual_check("nulling_residuals", residuals),
        ]
    )


def check_combining(
    M: int, m: int, samples: int, master_seed: int
) -> ValidationReport:
    """Combiner gain law, residual cross-gain law and cancelation residuals."""
    if not 0 <= m < M:
        raise ParameterError(f"need 0 <= m < M (got m={m}, M={M})")
    rng = trial_rng(master_seed, 0, _STREAM_COMBINING)
    canceled = draw_gaussian((samples, m, M), rng)
    signal = draw_gaussian((samples, M), rng)
    # t = R R^H s / |R^H s| with R spanning the vectors orthogonal to every canceled column
    combiners, gains = beamformers_for_targets(np.conj(canceled), np.conj(signal))
    fresh = draw_gaussian((samples, M), rng)
    cross = np.abs(np.einsum("bi,bi->b", np.conj(combiners), fresh)) ** 2
    residuals = np.abs(
        np.einsum("bi,bki->bk", np.conj(combiners), canceled)
    ).ravel()
    return ValidationReport(
        [
            _ks_fit(f"combiner_gain_gamma_{M - m}", gains, stats.gamma(M - m).cdf),
            _ks_fit("combiner_cross_gain_exp", cross, stats.expon().cdf),
            _residual_check("cancelation_residuals", residuals),
        ]
    )


def interference_samples(
    components: Sequence[Tuple[float, float, float]],
    alpha: float,
    samples: int,
    master_seed: int,
    stream: int,
) -> np.ndarray:
    """Rayleigh-faded interference at the origin from independent PPPs.

    Args:
        components: ``(intensity, power, radius)`` per PPP
    """
    values = np.empty(samples)
    for trial in range(samples):
        rng = trial_rng(master_seed, trial, stream)
        total = 0.0
        for intensity, power, radius in components:
            count = rng.poisson(intensity * np.pi * radius**2)
            distances = radius * np.sqrt(rng.random(count))
            total += power * float(np.sum(distances ** (-alpha) * rng.exponential(size=count)))
        values[trial] = total
    return values


def _require_both_networks(config: ScenarioConfig) -> None:
    if config.lambda_p <= 0 or config.lambda_s <= 0:
        raise ParameterError("validation needs lambda_p > 0 and lambda_s > 0")


def validate_superposition(
    config: ScenarioConfig, plan: TrialPlan, samples: int = 10_000
) -> ValidationReport:
    """Two power classes vs a single unit-power PPP, two-sample KS.

    The networks are sampled on discs of radius ``R * P^(1/alpha)`` so that
    both constructions cover exactly the same unit-power disc ``R``.
    """
    _require_both_networks(config)
    alpha = config.alpha
    radius = plan.region_radius or VALIDATION_RADIUS
    equivalent = (
        config.lambda_p * config.P_p ** (2.0 / alpha)
        + config.lambda_s * config.P_s ** (2.0 / alpha)
    )
    two_network = interference_samples(
        [
            (config.lambda_p, config.P_p, radius * config.P_p ** (1.0 / alpha)),
            (config.lambda_s, config.P_s, radius * config.P_s ** (1.0 / alpha)),
        ],
        alpha,
        samples,
        plan.master_seed,
        _STREAM_TWO_NETWORK,
    )
    single = interference_samples(
        [(equivalent, 1.0, radius)], alpha, samples, plan.master_seed, _STREAM_SINGLE
    )
    control = interference_samples(
        [(equivalent / 2.0, 1.0, radius)],
        alpha,
        samples,
        plan.master_seed,
        _STREAM_CONTROL,
    )

    same = stats.ks_2samp(two_network, single)
    wrong = stats.ks_2samp(two_network, control)
    return ValidationReport(
        [
            CheckResult(
                name="superposition",
                passed=bool(same.pvalue > SIGNIFICANCE),
                statistic=float(same.statistic),
                p_value=float(same.pvalue),
                detail=f"equivalent intensity {equivalent:.6g}",
            ),
            CheckResult(
                name="superposition_negative_control",
                passed=bool(wrong.pvalue < SIGNIFICANCE),
                statistic=float(wrong.statistic),
                p_value=float(wrong.pvalue),
                detail="half the equivalent intensity must be rejected",
            ),
        ]
    )


def validate_power_marks(
    config: ScenarioConfig, plan: TrialPlan, samples: int = 10_000
) -> ValidationReport:
    """Union PPP with per-point power marks vs two separate networks."""
    _require_both_networks(config)
    alpha = config.alpha
    radius = plan.region_radius or VALIDATION_RADIUS
    two_network = interference_samples(
        [(config.lambda_p, config.P_p, radius), (config.lambda_s, config.P_s, radius)],
        alpha,
        samples,
        plan.master_seed,
        _STREAM_TWO_NETWORK,
    )

    total = config.lambda_p + config.lambda_s
    primary_share = config.lambda_p / total
    marked = np.empty(samples)
    for trial in range(samples):
        rng = trial_rng(plan.master_seed, trial, _STREAM_MARKS)
        count = rng.poisson(total * np.pi * radius**2)
        distances = radius * np.sqrt(rng.random(count))
        powers = np.where(rng.random(count) < primary_share, config.P_p, config.P_s)
        marked[trial] = float(
            np.sum(powers * distances ** (-alpha) * rng.exponential(size=count))
        )

    result = stats.ks_2samp(two_network, marked)
    return ValidationReport(
        [
            CheckResult(
                name="power_marks",
                passed=bool(result.pvalue > SIGNIFICANCE),
                statistic=float(result.statistic),
                p_value=float(result.pvalue),
            )
        ]
    )


def check_baseline(config: ScenarioConfig, plan: TrialPlan) -> CheckResult:
    """Secondary-free MC outage against its closed form."""
    estimate = estimate_outage(config, Regime.BASELINE, OutageKind.BASELINE, plan)
    closed_form = baseline_outage(config.lambda_p, config.beta_p, config.d_p, config.alpha)
    difference = abs(estimate.p_hat - closed_form)
    allowed = max(BASELINE_ABSOLUTE_TOLERANCE, 2.0 * estimate.half_width)
    return CheckResult(
        name="baseline_closed_form",
        passed=difference <= allowed,
        statistic=difference,
        detail=f"mc {estimate.p_hat:.5f} vs closed form {closed_form:.5f}",
    )


def check_siso_closed_form(config: ScenarioConfig, plan: TrialPlan) -> ValidationReport:
    """Single-antenna MC outages at both typical receivers against their closed forms.

    The scenario is reduced to ``N = M = 1``; both outages come from the
    same trials.
    """
    siso = config.with_updates(N=1, M=1, k=0, m=0)
    counts = simulate_counts(siso, Regime.SISO, plan)
    report = ValidationReport()
    for which, closed_form in (
        (OutageKind.PRIMARY, primary_outage_siso(siso, siso.lambda_s)),
        (OutageKind.SECONDARY, secondary_outage_siso(siso, siso.lambda_s)),
    ):
        estimate = counts.estimate(which)
        difference = abs(estimate.p_hat - closed_form)
        allowed = max(BASELINE_ABSOLUTE_TOLERANCE, 2.0 * estimate.half_width)
        report.checks.append(
            CheckResult(
                name=f"siso_{which.value}_closed_form",
                passed=difference <= allowed,
                statistic=difference,
                detail=f"mc {estimate.p_hat:.5f} vs closed form {closed_form:.5f}",
            )
        )
    return report


def lemma_suite(
    config: ScenarioConfig,
    plan: TrialPlan,
    samples: int = 10_000,
    antennas: Tuple[int, int] = (4, 2),
) -> ValidationReport:
    """Every distributional check plus the baseline and single-antenna closed forms.

    ``antennas`` is ``(array size, DOF spent)`` for both the nulling and
    the combining checks. Missing intensities are filled with 0.01 (primary)
    and 0.005 (secondary) for the superposition and closed-form checks.
    """
    size, spent = antennas
    report = ValidationReport()
    report.extend(check_nulling(size, spent, samples, plan.master_seed))
    report.extend(check_combining(size, spent, samples, plan.master_seed))

    filled = config
    if config.lambda_p <= 0 or config.lambda_s <= 0:
        filled = config.with_updates(
            lambda_p=config.lambda_p or 0.01, lambda_s=config.lambda_s or 0.005
        )
    report.extend(validate_superposition(filled, plan, samples))
    report.extend(validate_power_marks(filled, plan, samples))
    report.checks.append(check_baseline(filled, plan))
    report.extend(check_siso_closed_form(filled, plan))

    logger.info(
        "lemma_suite_done",
        verdict=report.verdict,
        checks=len(report.checks),
        failed=report.checks_failed,
    )
    return report


@dataclass(frozen=True)
class CanceledCountDistribution:
    """Per-trial canceled counts at the typical primary receiver."""

    prefix: np.ndarray
    exact_set: np.ndarray

    def counts(self, mode: CancelMode) -> np.ndarray:
        return self.prefix if CancelMode(mode) == CancelMode.PREFIX else self.exact_set

    def probability_below(self, c: int, mode: CancelMode) -> float:
        """Empirical ``P(C < c)``."""
        values = self.counts(mode)
        return float(np.mean(values < c)) if values.size else 0.0

    def histogram(self, mode: CancelMode) -> np.ndarray:
        values = self.counts(mode)
        return np.bincount(values) if values.size else np.zeros(1, dtype=int)

    @property
    def exact_dominates(self) -> bool:
        return bool(np.all(self.exact_set >= self.prefix))


def empirical_C_distribution(
    config: ScenarioConfig,
    plan: TrialPlan,
    regime: Regime = Regime.MISO,
    region: Optional[Region] = None,
) -> CanceledCountDistribution:
    """Canceled count at the typical primary receiver under both modes.

    Raises:
        ParameterError: For a single-antenna regime
    """
    regime = Regime(regime)
    if regime not in (Regime.MISO, Regime.MIMO):
        raise ParameterError("canceled counts need the miso or mimo regime")
    region = region or resolve_region(config, plan, get_settings().max_region_radius)
    prefix = np.zeros(plan.trials, dtype=int)
    exact = np.zeros(plan.trials, dtype=int)
    for trial in range(plan.trials):
        rng = trial_rng(plan.master_seed, trial)
        real = realize(config, region, rng, regime, channel_model=ChannelModel.MARGINAL)
        prefix[trial] = canceled_count((0.0, 0.0), real, CancelMode.PREFIX)
        exact[trial] = canceled_count((0.0, 0.0), real, CancelMode.EXACT_SET)
    return CanceledCountDistribution(prefix=prefix, exact_set=exact)


@dataclass(frozen=True)
class TruncationReport:
    """Outage estimate at a radius and at twice that radius."""

    radius: float
    base: OutageEstimate
    doubled: OutageEstimate

    @property
    def difference(self) -> float:
        return abs(self.doubled.p_hat - self.base.p_hat)

    @property
    def allowed(self) -> float:
        return float(np.hypot(self.base.half_width, self.doubled.half_width))

    @property
    def adequate(self) -> bool:
        return self.difference <= self.allowed


def truncation_check(
    config: ScenarioConfig,
    regime: Regime,
    which: OutageKind,
    plan: TrialPlan,
) -> TruncationReport:
    """Re-estimate an outage on a disc of twice the radius."""
    cap = get_settings().max_region_radius
    region = resolve_region(config, plan, cap)
    doubled_region = Region(radius=2.0 * region.radius)
    base = estimate_outage(config, regime, which, plan, region=region)
    doubled = estimate_outage(config, regime, which, plan, region=doubled_region)
    report = TruncationReport(radius=region.radius, base=base, doubled=doubled)
    logger.info(
        "truncation_check_done",
        radius=region.radius,
        difference=report.difference,
        allowed=report.allowed,
        adequate=report.adequate,
    )
    return report
