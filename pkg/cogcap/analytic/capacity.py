"""
Closed-form outage and capacity expressions for the single-antenna
secondary network, plus the scaling exponents of the multi-antenna regimes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np
import structlog

from ..enums import BindingConstraint, CrossPowerMode, Regime
from ..errors import DivergenceError, InfeasibleError, ParameterError
from ..schemas.scenario import ScenarioConfig

logger = structlog.get_logger()

# alpha below 2 + ALPHA_MARGIN is treated as divergent
ALPHA_MARGIN = 1e-6
EPS_CONSISTENCY_TOLERANCE = 1e-6


def c1(alpha: float) -> float:
    """``2 pi^2 csc(2 pi / alpha) / alpha``.

    Raises:
        DivergenceError: If ``alpha <= 2 + 1e-6``
    """
    if not alpha > 2.0 + ALPHA_MARGIN:
        raise DivergenceError(
            f"alpha={alpha} is too close to 2; aggregate interference diverges"
        )
    return 2.0 * math.pi**2 / (alpha * math.sin(2.0 * math.pi / alpha))


def success_laplace(arg: float, intensity: float, alpha: float) -> float:
    """Laplace transform of Rayleigh-faded unit-power PPP interference at ``arg``.

    ``exp(-intensity * c1 * arg^(2/alpha))``.
    """
    if arg < 0:
        raise ParameterError(f"Laplace argument must be >= 0 (got {arg})")
    if intensity < 0:
        raise ParameterError(f"intensity must be >= 0 (got {intensity})")
    return math.exp(-intensity * c1(alpha) * arg ** (2.0 / alpha))


def baseline_outage(intensity: float, beta: float, d: float, alpha: float) -> float:
    """Outage of a typical link among PPP interferers of equal power."""
    if beta < 0:
        raise ParameterError(f"beta must be >= 0 (got {beta})")
    if d <= 0:
        raise ParameterError(f"link distance must be > 0 (got {d})")
    return 1.0 - success_laplace(beta * d**alpha, intensity, alpha)


def transmission_capacity(lambda_star: float, eps_s: float, beta_s: float) -> float:
    """``lambda * (1 - eps) * log2(1 + beta)`` in bits/s/Hz/m^2."""
    return lambda_star * (1.0 - eps_s) * math.log2(1.0 + beta_s)


def primary_capacity(lambda_p: float, eps_total: float, beta_p: float) -> float:
    """Transmission capacity of the primary network at its total outage."""
    return transmission_capacity(lambda_p, eps_total, beta_p)


def _cross_power(config: ScenarioConfig, mode: CrossPowerMode) -> float:
    if mode == CrossPowerMode.PAPER_LITERAL:
        return config.beta_s
    return config.power_ratio * config.beta_s


def secondary_outage_siso(
    config: ScenarioConfig,
    lambda_s: float,
    mode: CrossPowerMode = CrossPowerMode.CORRECTED,
) -> float:
    """Secondary outage with single antennas at secondary intensity ``lambda_s``."""
    mode = CrossPowerMode(mode)
    alpha = config.alpha
    exponent = 2.0 / alpha
    load = lambda_s + config.lambda_p * _cross_power(config, mode) ** exponent
    return 1.0 - math.exp(
        -c1(alpha) * config.d_s**2 * config.beta_s**exponent * load
    )


def primary_outage_siso(config: ScenarioConfig, lambda_s: float) -> float:
    """Primary outage with single-antenna secondary interferers at ``lambda_s``."""
    alpha = config.alpha
    exponent = 2.0 / alpha
    load = config.lambda_p + lambda_s * (config.P_s / config.P_p) ** exponent
    return 1.0 - math.exp(
        -c1(alpha) * config.d_p**2 * config.beta_p**exponent * load
    )


@dataclass(frozen=True)
class CapacityResult:
    """Maximum secondary intensity and the resulting transmission capacity."""

    lambda_star: float
    binding_constraint: BindingConstraint
    first_term: float
    second_term: float
    capacity: float
    mode: CrossPowerMode = CrossPowerMode.CORRECTED

    @property
    def clamped(self) -> bool:
        """True when a negative term forced ``lambda_star`` to 0."""
        return min(self.first_term, self.second_term) < 0


def _check_eps_consistency(config: ScenarioConfig) -> float:
    closed_form = baseline_outage(config.lambda_p, config.beta_p, config.d_p, config.alpha)
    if config.eps_p_nc is None:
        return closed_form
    if abs(config.eps_p_nc - closed_form) > EPS_CONSISTENCY_TOLERANCE:
        logger.warning(
            "eps_p_nc_inconsistent",
            configured=config.eps_p_nc,
            closed_form=closed_form,
            lambda_p=config.lambda_p,
        )
    return config.eps_p_nc


def lambda_star_siso(
    config: ScenarioConfig, mode: CrossPowerMode = CrossPowerMode.CORRECTED
) -> CapacityResult:
    """Largest single-antenna secondary intensity meeting both outage constraints.

    ``paper_literal`` and ``corrected`` differ in the power ratio applied to
    primary interference at the secondary receiver; ``derived`` also evaluates
    the primary-constraint term through the Laplace transform.

    Raises:
        InfeasibleError: If ``delta_p >= 1 - eps_p_nc``
    """
    mode = CrossPowerMode(mode)
    alpha = config.alpha
    constant = c1(alpha)
    eps = _check_eps_consistency(config)
    if config.delta_p >= 1.0 - eps:
        raise InfeasibleError(
            f"delta_p={config.delta_p} leaves no room above eps_p_nc={eps:.6g}"
        )

    budget = -math.log((1.0 - eps - config.delta_p) / (1.0 - eps))
    if budget == 0.0 or config.P_s == 0.0:
        first = 0.0 if budget == 0.0 else math.inf
    elif config.beta_p == 0.0:
        first = math.inf
    elif mode == CrossPowerMode.DERIVED:
        ratio = config.P_s * config.beta_p / config.P_p
        first = budget / (constant * config.d_p**2 * ratio ** (2.0 / alpha))
    else:
        ratio = config.P_p / (config.P_s * config.beta_p)
        first = budget * ratio ** (alpha / 2.0) / config.d_p**2

    if config.beta_s == 0.0:
        second = math.inf
    else:
        exponent = 2.0 / alpha
        primary_load = (
            config.lambda_p * constant * config.d_s**2
            * _cross_power(config, mode) ** exponent
        )
        second = (-math.log(1.0 - config.eps_s) - primary_load) / (
            constant * config.beta_s**exponent * config.d_s**2
        )

    lambda_star = max(0.0, min(first, second))
    binding = (
        BindingConstraint.PRIMARY_OUTAGE
        if first <= second
        else BindingConstraint.SECONDARY_OUTAGE
    )
    result = CapacityResult(
        lambda_star=lambda_star,
        binding_constraint=binding,
        first_term=first,
        second_term=second,
        capacity=transmission_capacity(lambda_star, config.eps_s, config.beta_s),
        mode=mode,
    )
    logger.debug(
        "lambda_star_siso",
        mode=mode.value,
        first_term=first,
        second_term=second,
        lambda_star=lambda_star,
    )
    return result


@dataclass(frozen=True)
class ScalingBound:
    """Exponents of the lower and upper bounds on the secondary intensity.

    ``lower_variable``/``upper_variable`` name the antenna count each bound
    grows in; ``variable`` is the lower-bound variable.
    """

    lower_exponent: float
    upper_exponent: float
    variable: str
    lower_variable: str = "N"
    upper_variable: str = "N"


def scaling_bounds(regime: Regime, alpha: float, N: int, M: int = 1) -> ScalingBound:
    """Growth exponents of the intensity bounds in the multi-antenna regimes.

    Raises:
        DivergenceError: If ``alpha <= 2 + 1e-6``
        ParameterError: For a single-antenna regime
    """
    c1(alpha)
    regime = Regime(regime)
    tail = 2.0 / alpha
    if regime == Regime.MISO:
        return ScalingBound(min(tail, 1.0 - tail), tail, "N", "N", "N")
    if regime != Regime.MIMO:
        raise ParameterError(f"no scaling bounds for regime '{regime.value}'")
    if N == M:
        return ScalingBound(1.0 - tail, 1.0, "N", "N", "N")

    if M <= N ** (1.0 - tail):
        lower, lower_variable = 1.0, "M"
    else:
        lower, lower_variable = 1.0 - tail, "N"
    if N <= M ** (1.0 + tail):
        upper, upper_variable = 1.0, "N"
    else:
        upper, upper_variable = 1.0 + tail, "M"
    return ScalingBound(lower, upper, lower_variable, lower_variable, upper_variable)


def fit_scaling_exponent(
    points: Iterable[Tuple[float, float]],
) -> Tuple[float, float, float]:
    """Least-squares line through ``(ln size, ln lambda)``.

    Returns:
        ``(slope, intercept, residual)`` where ``residual`` is the RMS of
        the log-domain residuals

    Raises:
        ParameterError: Fewer than 3 points, non-increasing sizes or
            non-positive values
    """
    data = np.asarray(list(points), dtype=float).reshape(-1, 2)
    if data.shape[0] < 3:
        raise ParameterError(f"need at least 3 points, got {data.shape[0]}")
    sizes, values = data[:, 0], data[:, 1]
    if np.any(np.diff(sizes) <= 0):
        raise ParameterError("sizes must be strictly increasing")
    if np.any(sizes <= 0) or np.any(values <= 0):
        raise ParameterError("sizes and values must be positive for a log-log fit")

    x = np.log(sizes)
    y = np.log(values)
    design = np.column_stack((x, np.ones_like(x)))
    (slope, intercept), *_ = np.linalg.lstsq(design, y, rcond=None)
    residual = float(np.sqrt(np.mean((y - design @ np.array([slope, intercept])) ** 2)))
    return float(slope), float(intercept), residual
