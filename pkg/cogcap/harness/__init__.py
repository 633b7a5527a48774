"""Monte Carlo orchestration: outage estimation, intensity search, validation."""

from .executor import (
    ProcessPoolTrialExecutor,
    SerialExecutor,
    TrialExecutor,
    get_executor,
)
from .outage import (
    OutageCounts,
    OutageEstimate,
    estimate_outage,
    simulate_counts,
    wilson_interval,
)
from .search import (
    IntensityEvaluation,
    IntensitySearchResult,
    bisect_intensity,
    max_intensity_search,
)
from .seeding import trial_rng
from .validation import (
    CanceledCountDistribution,
    CheckResult,
    TruncationReport,
    ValidationReport,
    empirical_C_distribution,
    lemma_suite,
    truncation_check,
    validate_power_marks,
    validate_superposition,
)
from .window import auto_region_radius, resolve_region

__all__ = [
    "CanceledCountDistribution",
    "CheckResult",
    "IntensityEvaluation",
    "IntensitySearchResult",
    "OutageCounts",
    "OutageEstimate",
    "ProcessPoolTrialExecutor",
    "SerialExecutor",
    "TrialExecutor",
    "TruncationReport",
    "ValidationReport",
    "auto_region_radius",
    "bisect_intensity",
    "empirical_C_distribution",
    "estimate_outage",
    "get_executor",
    "lemma_suite",
    "max_intensity_search",
    "resolve_region",
    "simulate_counts",
    "trial_rng",
    "truncation_check",
    "validate_power_marks",
    "validate_superposition",
    "wilson_interval",
]
