"""
Signal-to-interference ratios at the typical receivers of a realization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..enums import CancelMode, Regime
from ..errors import ParameterError
from .realization import DeploymentRealization


@dataclass(frozen=True)
class SirOutcome:
    """SIR at one typical receiver plus its decomposition.

    ``sir`` is ``math.inf`` when every interferer is canceled or absent;
    ``unbounded`` flags that case so callers never mistake it for a number.
    """

    sir: float
    signal: float
    primary_interference: float
    secondary_interference: float
    canceled_count: int = 0
    canceled_interferers: int = 0

    @property
    def interference(self) -> float:
        return self.primary_interference + self.secondary_interference

    @property
    def unbounded(self) -> bool:
        return math.isinf(self.sir)

    def is_outage(self, threshold: float) -> bool:
        return self.sir < threshold


def sir_from_components(signal: float, interference: Sequence[float]) -> float:
    """``signal / sum(interference)``, infinite when nothing interferes."""
    total = float(np.sum(interference)) if len(interference) else 0.0
    if total <= 0.0:
        return math.inf
    return float(signal) / total


def _path_loss(points: np.ndarray, alpha: float) -> np.ndarray:
    distances = np.hypot(points[:, 0], points[:, 1])
    return distances ** (-alpha)


def _ordered_targeting(real: DeploymentRealization, receiver: np.ndarray, index: int):
    # Secondary index 0 is the typical secondary pair and never interferes here
    if real.k == 0 or len(real.secondary) <= 1:
        return np.zeros(0, dtype=bool), np.zeros(0, dtype=int)
    targeting = np.any(real.nulling_targets[1:] == index, axis=1)
    offsets = real.secondary.points[1:] - receiver
    order = np.argsort(np.hypot(offsets[:, 0], offsets[:, 1]), kind="stable")
    return targeting, order


def canceled_count(
    primary_receiver: Sequence[float],
    real: DeploymentRealization,
    mode: Optional[CancelMode] = None,
) -> int:
    """Number of secondary transmitters treated as nulled at a primary receiver.

    ``prefix`` counts the leading run of nulling transmitters in distance
    order; ``exact_set`` counts every transmitter that nulls toward it.

    Raises:
        ParameterError: If the point is not a primary receiver of ``real``
    """
    mode = CancelMode(mode or real.cancel_mode)
    receivers = real.primary.receivers
    point = np.asarray(primary_receiver, dtype=float).reshape(2)
    assert receivers is not None
    matches = np.flatnonzero(np.all(np.abs(receivers - point) <= 1e-9, axis=1))
    if matches.size == 0:
        raise ParameterError(f"{point.tolist()} is not a primary receiver")
    targeting, order = _ordered_targeting(real, point, int(matches[0]))
    if targeting.size == 0:
        return 0
    if mode == CancelMode.EXACT_SET:
        return int(targeting.sum())
    ordered = targeting[order]
    misses = np.flatnonzero(~ordered)
    return int(misses[0]) if misses.size else int(ordered.size)


def _secondary_gains_at_primary(
    real: DeploymentRealization, mode: CancelMode
) -> tuple[np.ndarray, int]:
    unnulled = real.channels.secondary_to_primary_unnulled[1:]
    targeting, order = _ordered_targeting(real, np.zeros(2), 0)
    if targeting.size == 0:
        return unnulled, 0
    if mode == CancelMode.EXACT_SET:
        return np.where(targeting, 0.0, unnulled), int(targeting.sum())
    count = canceled_count((0.0, 0.0), real, CancelMode.PREFIX)
    gains = unnulled.copy()
    gains[order[:count]] = 0.0
    return gains, count


def sir_primary(
    real: DeploymentRealization, mode: Optional[CancelMode] = None
) -> SirOutcome:
    """SIR at the typical primary receiver.

    Nulling transmitters inside the canceled set contribute nothing. Under
    ``prefix`` the remaining nulling transmitters are charged a fresh
    unnulled gain; ``exact_set`` excludes every nulling transmitter, so its
    SIR is never below the ``prefix`` one on the same realization.
    """
    config = real.config
    mode = CancelMode(mode or real.cancel_mode)
    signal = config.P_p * config.d_p ** (-config.alpha) * real.channels.primary_to_primary[0]
    primary_terms = (
        config.P_p
        * _path_loss(real.primary.points[1:], config.alpha)
        * real.channels.primary_to_primary[1:]
    )
    if real.has_secondary:
        gains, count = _secondary_gains_at_primary(real, mode)
        secondary_terms = (
            config.P_s * _path_loss(real.secondary.points[1:], config.alpha) * gains
        )
    else:
        secondary_terms, count = np.zeros(0), 0
    primary_total = float(primary_terms.sum())
    secondary_total = float(secondary_terms.sum())
    return SirOutcome(
        sir=sir_from_components(signal, [primary_total, secondary_total]),
        signal=float(signal),
        primary_interference=primary_total,
        secondary_interference=secondary_total,
        canceled_count=count,
    )


def sir_secondary(real: DeploymentRealization) -> SirOutcome:
    """SIR at the typical secondary receiver after combining.

    Raises:
        ParameterError: For a realization without a secondary network
    """
    if not real.has_secondary:
        raise ParameterError("baseline realizations carry no secondary link")
    config = real.config
    signal = config.P_s * config.d_s ** (-config.alpha) * real.channels.secondary_signal
    secondary_total = float(
        np.sum(
            config.P_s
            * _path_loss(real.secondary.points[1:], config.alpha)
            * real.channels.secondary_to_secondary[1:]
        )
    )
    primary_total = float(
        np.sum(
            config.P_p
            * _path_loss(real.primary.points[1:], config.alpha)
            * real.channels.primary_to_secondary[1:]
        )
    )
    return SirOutcome(
        sir=sir_from_components(signal, [primary_total, secondary_total]),
        signal=float(signal),
        primary_interference=primary_total,
        secondary_interference=secondary_total,
        canceled_interferers=int(
            real.canceled_primary.sum() + real.canceled_secondary.sum()
        ),
    )


def sir_baseline(real: DeploymentRealization) -> SirOutcome:
    """Primary SIR with the secondary network absent."""
    config = real.config
    signal = config.P_p * config.d_p ** (-config.alpha) * real.channels.primary_to_primary[0]
    primary_total = float(
        np.sum(
            config.P_p
            * _path_loss(real.primary.points[1:], config.alpha)
            * real.channels.primary_to_primary[1:]
        )
    )
    return SirOutcome(
        sir=sir_from_components(signal, [primary_total]),
        signal=float(signal),
        primary_interference=primary_total,
        secondary_interference=0.0,
    )


def outage_indicators(
    real: DeploymentRealization, mode: Optional[CancelMode] = None
) -> tuple[bool, bool]:
    """(primary outage, secondary outage) for one realization.

    The secondary indicator is ``False`` for baseline realizations.
    """
    config = real.config
    if real.regime == Regime.BASELINE:
        return sir_baseline(real).is_outage(config.beta_p), False
    return (
        sir_primary(real, mode).is_outage(config.beta_p),
        sir_secondary(real).is_outage(config.beta_s),
    )
