"""
Canonical enums.

Values are the strings used in config files, CSV columns and CLI flags.
"""

from enum import Enum


class Network(str, Enum):
    """Network membership mark of a point."""

    PRIMARY = "primary"
    SECONDARY = "secondary"


class Regime(str, Enum):
    """Antenna regime of the secondary network."""

    BASELINE = "baseline"
    SISO = "siso"
    MISO = "miso"
    MIMO = "mimo"


class OutageKind(str, Enum):
    """Which receiver an outage estimate refers to."""

    PRIMARY = "primary"
    SECONDARY = "secondary"
    BASELINE = "baseline"


class CancelMode(str, Enum):
    """How the canceled secondary interferers at a primary receiver are chosen."""

    PREFIX = "prefix"
    EXACT_SET = "exact_set"


class ChannelModel(str, Enum):
    """Channel synthesis fidelity."""

    EXPLICIT = "explicit"
    MARGINAL = "marginal"


class CrossPowerMode(str, Enum):
    """Variant of the single-antenna capacity expression."""

    PAPER_LITERAL = "paper_literal"
    CORRECTED = "corrected"
    DERIVED = "derived"


class BindingConstraint(str, Enum):
    """Outage constraint that limits the secondary intensity."""

    PRIMARY_OUTAGE = "primary_outage"
    SECONDARY_OUTAGE = "secondary_outage"


class Command(str, Enum):
    """CLI commands."""

    CAPACITY = "capacity"
    SWEEP = "sweep"
    VALIDATE = "validate"
    SCALING = "scaling"
    FIGURES = "figures"


class OutputFormat(str, Enum):
    """Tabular result formats."""

    CSV = "csv"
    JSON = "json"
