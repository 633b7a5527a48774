"""
Error hierarchy for cogcap.

Every error carries a stable ``code`` for programmatic handling and a
human-readable ``message``. The CLI maps error classes to exit codes.
"""

from __future__ import annotations

from typing import Any, Dict, List, Optional


class CogcapError(Exception):
    """Base class for all cogcap errors.

    Attributes:
        code: Stable error code
        message: Human-readable error description
    """

    code: str = "COGCAP_ERROR"

    def __init__(self, message: str, code: Optional[str] = None):
        self.code = code or type(self).code
        self.message = message
        super().__init__(f"{self.code}: {message}")

    def __reduce__(self):
        return (type(self), (self.message, self.code))

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dict for JSON serialization."""
        return {
            "error": type(self).__name__,
            "code": self.code,
            "message": self.message,
        }


class ParameterError(CogcapError):
    """Invalid model or plan parameter."""

    code = "PARAMETER_INVALID"


class DimensionError(CogcapError):
    """Non-conformable vector/matrix dimensions."""

    code = "DIMENSION_MISMATCH"


class DegreesOfFreedomError(CogcapError):
    """More nulling constraints than antennas."""

    code = "DOF_EXHAUSTED"


class ConditioningError(CogcapError):
    """Constraint rows are numerically rank-deficient."""

    code = "RANK_DEFICIENT"


class DegenerateChannelError(CogcapError):
    """Own channel has (numerically) no component in the allowed subspace."""

    code = "DEGENERATE_CHANNEL"


class DivergenceError(CogcapError):
    """Path-loss exponent too close to 2; aggregate interference diverges."""

    code = "ALPHA_DIVERGENT"


class InfeasibleError(CogcapError):
    """No positive secondary intensity satisfies the outage constraints."""

    code = "INFEASIBLE"


class SimulationError(CogcapError):
    """A Monte Carlo trial failed."""

    code = "TRIAL_FAILED"

    def __init__(self, trial_index: int, cause: Exception):
        self.trial_index = trial_index
        self.cause = cause
        super().__init__(f"trial {trial_index} failed: {cause}")

    def __reduce__(self):
        return (type(self), (self.trial_index, self.cause))

    def to_dict(self) -> Dict[str, Any]:
        data = super().to_dict()
        data["trial_index"] = self.trial_index
        return data


class SearchDiagnosticError(CogcapError):
    """Bisection saw outage estimates that are non-monotone beyond CI noise."""

    code = "NON_MONOTONE"

    def __init__(self, message: str, history: List[Dict[str, Any]]):
        self.history = history
        super().__init__(message)

    def __reduce__(self):
        return (type(self), (self.message, self.history))

    def to_dict(self) -> Dict[str, Any]:
        data = super().to_dict()
        data["history"] = self.history
        return data


class PlotError(CogcapError):
    """Plot input cannot be rendered (too few points, degenerate range)."""

    code = "PLOT_DEGENERATE"
