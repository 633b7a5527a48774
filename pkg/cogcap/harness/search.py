"""
Maximum secondary intensity under the primary and secondary outage constraints.

The search brackets the feasibility boundary by doubling, then bisects.
All bisection evaluations share the same per-trial seeds and the same
dominating secondary process, thinned to the candidate intensity, so the
empirical outage is monotone in ``lambda_s`` up to channel-model effects.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

import structlog

from ..config import get_settings
from ..enums import BindingConstraint, OutageKind, Regime
from ..errors import ParameterError, SearchDiagnosticError
from ..schemas.plan import TrialPlan
from ..schemas.scenario import ScenarioConfig
from .executor import TrialExecutor, get_executor
from .outage import OutageEstimate, simulate_counts
from .window import resolve_region

logger = structlog.get_logger()

DEFAULT_INITIAL_HIGH = 0.01
MAX_DOUBLINGS = 30


@dataclass(frozen=True)
class IntensityEvaluation:
    """Outage estimates at one candidate intensity.

    ``primary`` is ``None`` when the primary constraint is vacuous.
    """

    lambda_s: float
    secondary: OutageEstimate
    secondary_budget: float
    primary: Optional[OutageEstimate] = None
    primary_budget: float = 1.0

    @property
    def primary_ok(self) -> bool:
        return self.primary is None or self.primary.p_hat <= self.primary_budget

    @property
    def secondary_ok(self) -> bool:
        return self.secondary.p_hat <= self.secondary_budget

    @property
    def feasible(self) -> bool:
        return self.primary_ok and self.secondary_ok

    @property
    def violated(self) -> Optional[BindingConstraint]:
        """The constraint broken hardest (relative excess), if any."""
        excess = {}
        if not self.primary_ok:
            assert self.primary is not None
            excess[BindingConstraint.PRIMARY_OUTAGE] = (
                self.primary.p_hat - self.primary_budget
            ) / max(self.primary_budget, 1e-12)
        if not self.secondary_ok:
            excess[BindingConstraint.SECONDARY_OUTAGE] = (
                self.secondary.p_hat - self.secondary_budget
            ) / max(self.secondary_budget, 1e-12)
        if not excess:
            return None
        return max(excess, key=excess.get)  # type: ignore[arg-type]

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "lambda_s": self.lambda_s,
            "secondary_p_hat": self.secondary.p_hat,
            "secondary_half_width": self.secondary.half_width,
            "feasible": self.feasible,
        }
        if self.primary is not None:
            data["primary_p_hat"] = self.primary.p_hat
            data["primary_half_width"] = self.primary.half_width
        return data


@dataclass(frozen=True)
class IntensitySearchResult:
    """Outcome of a maximum-intensity search.

    ``lambda_star_mc`` is the last feasible intensity; ``bracket[1]`` is the
    smallest intensity seen to violate a constraint.
    """

    lambda_star_mc: float
    bracket: Tuple[float, float]
    evaluations: int
    binding_constraint: BindingConstraint
    at_optimum: Optional[IntensityEvaluation] = None
    history: List[Dict[str, Any]] = field(default_factory=list)


# evaluate(lambda_s, dominating_lambda_s) -> IntensityEvaluation
Evaluator = Callable[[float, float], IntensityEvaluation]


def _check_monotone(coupled: List[IntensityEvaluation], history: List[Dict[str, Any]]) -> None:
    ordered = sorted(coupled, key=lambda e: e.lambda_s)
    for low, high in zip(ordered, ordered[1:]):
        pairs = [(low.secondary, high.secondary)]
        if low.primary is not None and high.primary is not None:
            pairs.append((low.primary, high.primary))
        for a, b in pairs:
            if a.p_hat - b.p_hat > a.half_width + b.half_width:
                raise SearchDiagnosticError(
                    f"outage fell from {a.p_hat:.4g} to {b.p_hat:.4g} while "
                    f"lambda_s rose from {low.lambda_s:.4g} to {high.lambda_s:.4g}",
                    history,
                )


def bisect_intensity(
    evaluate: Evaluator,
    *,
    tolerance: float = 0.05,
    initial_high: float = DEFAULT_INITIAL_HIGH,
    absolute_floor: float = 1e-7,
    max_evaluations: int = 80,
) -> IntensitySearchResult:
    """Bracket-and-bisect search for the largest feasible intensity.

    Args:
        evaluate: Outage evaluator; its second argument is the dominating
            intensity shared by coupled evaluations
        tolerance: Stop when ``(high - low) / midpoint`` drops below this
        initial_high: First candidate upper bracket
        absolute_floor: Stop when the bracket is narrower than this
        max_evaluations: Hard cap on evaluator calls

    Raises:
        SearchDiagnosticError: On non-monotone coupled estimates or when no
            violating intensity is found
    """
    if not 0 < tolerance < 1:
        raise ParameterError(f"tolerance must be in (0, 1) (got {tolerance})")
    if initial_high <= 0:
        raise ParameterError(f"initial_high must be > 0 (got {initial_high})")

    history: List[Dict[str, Any]] = []

    def run(lambda_s: float, dominating: float) -> IntensityEvaluation:
        evaluation = evaluate(lambda_s, dominating)
        history.append(evaluation.to_dict())
        logger.debug("bisection_step", **history[-1])
        return evaluation

    at_zero = run(0.0, 0.0)
    if not at_zero.feasible:
        return IntensitySearchResult(
            lambda_star_mc=0.0,
            bracket=(0.0, 0.0),
            evaluations=len(history),
            binding_constraint=at_zero.violated or BindingConstraint.PRIMARY_OUTAGE,
            at_optimum=at_zero,
            history=history,
        )

    low, low_eval = 0.0, at_zero
    high = initial_high
    for _ in range(MAX_DOUBLINGS):
        high_eval = run(high, high)
        if not high_eval.feasible:
            break
        low, low_eval = high, high_eval
        high *= 2.0
    else:
        raise SearchDiagnosticError(
            f"no violating intensity found up to {high:.4g}", history
        )

    binding = high_eval.violated or BindingConstraint.SECONDARY_OUTAGE
    dominating = high
    coupled = [high_eval]
    while len(history) < max_evaluations:
        width = high - low
        midpoint = 0.5 * (high + low)
        if width < absolute_floor or width / midpoint < tolerance:
            break
        evaluation = run(midpoint, dominating)
        coupled.append(evaluation)
        _check_monotone(coupled, history)
        if evaluation.feasible:
            low, low_eval = midpoint, evaluation
        else:
            high = midpoint
            binding = evaluation.violated or binding

    return IntensitySearchResult(
        lambda_star_mc=low,
        bracket=(low, high),
        evaluations=len(history),
        binding_constraint=binding,
        at_optimum=low_eval,
        history=history,
    )


def max_intensity_search(
    config: ScenarioConfig,
    regime: Regime,
    plan: TrialPlan,
    tolerance: float = 0.05,
    *,
    initial_high: float = DEFAULT_INITIAL_HIGH,
    executor: Optional[TrialExecutor] = None,
) -> IntensitySearchResult:
    """Largest ``lambda_s`` whose MC outages meet both constraints.

    The primary budget is ``eps_p_nc + delta_p``; it is vacuous when
    ``lambda_p == 0``. With ``delta_p == 0`` and a primary network present,
    the primary constraint binds at zero without simulation.

    Raises:
        ParameterError: For the baseline regime
        SearchDiagnosticError: On non-monotone estimates
    """
    regime = Regime(regime)
    if regime == Regime.BASELINE:
        raise ParameterError("the baseline regime has no secondary intensity to search")
    primary_vacuous = config.lambda_p == 0
    if config.delta_p == 0 and not primary_vacuous:
        logger.info("search_skipped", reason="zero_primary_budget")
        return IntensitySearchResult(
            lambda_star_mc=0.0,
            bracket=(0.0, 0.0),
            evaluations=0,
            binding_constraint=BindingConstraint.PRIMARY_OUTAGE,
        )

    executor = executor or get_executor(plan.workers)
    cap = get_settings().max_region_radius
    primary_budget = config.primary_outage_budget

    def evaluate(lambda_s: float, dominating: float) -> IntensityEvaluation:
        candidate = config.with_updates(lambda_s=lambda_s)
        region = resolve_region(config, plan, cap, dominating)
        counts = simulate_counts(
            candidate,
            regime,
            plan,
            region=region,
            dominating_lambda_s=dominating,
            executor=executor,
        )
        return IntensityEvaluation(
            lambda_s=lambda_s,
            secondary=counts.estimate(OutageKind.SECONDARY),
            secondary_budget=config.eps_s,
            primary=None if primary_vacuous else counts.estimate(OutageKind.PRIMARY),
            primary_budget=primary_budget,
        )

    log = logger.bind(regime=regime.value, trials=plan.trials, tolerance=tolerance)
    result = bisect_intensity(evaluate, tolerance=tolerance, initial_high=initial_high)
    log.info(
        "intensity_search_done",
        lambda_star_mc=result.lambda_star_mc,
        bracket=list(result.bracket),
        evaluations=result.evaluations,
        binding=result.binding_constraint.value,
    )
    return result
