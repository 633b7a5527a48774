"""
Deployment realizations: one snapshot of both networks with every fading
gain needed at the two typical receivers.

Layout conventions:
    * ``primary`` holds the primary transmitters with paired receivers; index 0
      is the typical primary pair whose receiver sits at the origin.
    * ``secondary`` holds the secondary transmitters; index 0 is the typical
      secondary pair whose receiver also sits at the origin.
    * Each SIR sums over its own network's Palm process only: the primary SIR
      ignores secondary index 0 and the secondary SIR ignores primary index 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import structlog
from scipy.spatial import cKDTree

from ..channel.mimo import (
    Combiner,
    beamformers_for_targets,
    combiner_basis,
    draw_gaussian,
    receive_combiner,
)
from ..enums import CancelMode, ChannelModel, Network, Regime
from ..errors import ParameterError
from ..geometry.ppp import (
    AccessConfig,
    PointSample,
    Region,
    displace_receivers,
    nearest,
    sample_ppp,
    superpose,
    thin_with_mask,
)
from ..schemas.scenario import ScenarioConfig

logger = structlog.get_logger()


@dataclass(frozen=True, eq=False)
class ChannelDraw:
    """Squared fading gains toward the two typical receivers.

    Attributes:
        primary_to_primary: ``(n_p,)`` gains at the primary receiver; entry 0 is
            the desired-signal gain ``|h_00|^2``
        secondary_to_primary: ``(n_s,)`` gains ``|g_0n u_n|^2`` with the actual
            beamformers (zero or numerically zero for nulling transmitters)
        secondary_to_primary_unnulled: ``(n_s,)`` gains as if no transmitter
            nulled toward the origin; equal to ``secondary_to_primary`` for
            non-nulling transmitters
        secondary_signal: desired-signal gain at the secondary receiver
        secondary_to_secondary: ``(n_s,)`` gains at the secondary receiver
            (entry 0 unused)
        primary_to_secondary: ``(n_p,)`` gains at the secondary receiver
            (entry 0 unused)
    """

    primary_to_primary: np.ndarray
    secondary_to_primary: np.ndarray
    secondary_to_primary_unnulled: np.ndarray
    secondary_signal: float
    secondary_to_secondary: np.ndarray
    primary_to_secondary: np.ndarray


@dataclass(frozen=True, eq=False)
class DeploymentRealization:
    """Both networks, their pairings, nulling targets, cancelation set and gains."""

    config: ScenarioConfig
    regime: Regime
    region: Region
    channel_model: ChannelModel
    cancel_mode: CancelMode
    primary: PointSample
    secondary: PointSample
    k: int
    m: int
    nulling_targets: np.ndarray
    canceled_primary: np.ndarray
    canceled_secondary: np.ndarray
    channels: ChannelDraw
    beamformers: Optional[np.ndarray] = None
    target_channels: Optional[np.ndarray] = None
    combiner: Optional[Combiner] = None

    @property
    def origin_targeted(self) -> np.ndarray:
        """Per secondary transmitter: does it null toward the typical primary receiver?"""
        if self.nulling_targets.shape[1] == 0:
            return np.zeros(len(self.secondary), dtype=bool)
        return np.any(self.nulling_targets == 0, axis=1)

    @property
    def has_secondary(self) -> bool:
        return self.regime != Regime.BASELINE


def _typical_pair(
    distance: float, region: Region, rng: np.random.Generator, network: Network
) -> Tuple[np.ndarray, np.ndarray]:
    if distance >= region.radius:
        raise ParameterError(
            f"link distance {distance} m does not fit in a {region.radius} m region"
        )
    angle = 2.0 * np.pi * rng.random()
    tx = np.array([[distance * np.cos(angle), distance * np.sin(angle)]])
    return tx, np.zeros((1, 2))


def _with_typical(
    sample: PointSample, tx: np.ndarray, rx: np.ndarray, network: Network
) -> PointSample:
    receivers = sample.receivers if sample.receivers is not None else np.zeros((0, 2))
    return PointSample(
        points=np.vstack((tx, sample.points)),
        marks=np.concatenate(([Network(network).value], sample.marks)),
        region=sample.region,
        receivers=np.vstack((rx, receivers)),
        intensity=sample.intensity,
    )


def nulling_targets_for(
    transmitters: np.ndarray, primary_receivers: np.ndarray, k: int
) -> np.ndarray:
    """Indices of the ``k`` nearest primary receivers of every transmitter.

    Missing neighbors (fewer receivers than ``k``) are reported as ``-1``.
    """
    count = transmitters.shape[0]
    if k == 0 or count == 0:
        return np.zeros((count, k), dtype=int)
    tree = cKDTree(primary_receivers)
    _, indices = tree.query(transmitters, k=k)
    indices = np.asarray(indices, dtype=int).reshape(count, k)
    indices[indices >= primary_receivers.shape[0]] = -1
    return indices


def cancelation_set(
    primary: PointSample, secondary: PointSample, m: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Masks of the ``m`` nearest union interferers to the origin.

    Entry 0 of each network (the typical transmitters) never qualifies. Ties
    are broken primary-first, then by index.
    """
    canceled_primary = np.zeros(len(primary), dtype=bool)
    canceled_secondary = np.zeros(len(secondary), dtype=bool)
    if m == 0:
        return canceled_primary, canceled_secondary
    interfering_primary = np.arange(len(primary)) > 0
    interfering_secondary = np.arange(len(secondary)) > 0
    union = superpose(
        primary.subset(interfering_primary), secondary.subset(interfering_secondary)
    )
    chosen = nearest((0.0, 0.0), union, m).indices
    n_primary = int(interfering_primary.sum())
    canceled_primary[1 + chosen[chosen < n_primary]] = True
    canceled_secondary[1 + chosen[chosen >= n_primary] - n_primary] = True
    return canceled_primary, canceled_secondary


def _marginal_channels(
    rng: np.random.Generator,
    n_primary: int,
    n_secondary: int,
    origin_targeted: np.ndarray,
    signal_shape: int,
) -> ChannelDraw:
    primary_to_primary = rng.exponential(size=n_primary)
    unnulled = rng.exponential(size=n_secondary)
    actual = np.where(origin_targeted, 0.0, unnulled)
    primary_to_secondary = rng.exponential(size=n_primary)
    secondary_to_secondary = rng.exponential(size=n_secondary)
    signal = float(rng.gamma(signal_shape)) if n_secondary else 0.0
    return ChannelDraw(
        primary_to_primary=primary_to_primary,
        secondary_to_primary=actual,
        secondary_to_primary_unnulled=unnulled,
        secondary_signal=signal,
        secondary_to_secondary=secondary_to_secondary,
        primary_to_secondary=primary_to_secondary,
    )


@dataclass(frozen=True, eq=False)
class _ExplicitDraw:
    primary_to_primary: np.ndarray
    to_primary: np.ndarray
    to_primary_unnulled: np.ndarray
    beamformers: np.ndarray
    target_channels: np.ndarray
    signal_matrix: np.ndarray
    secondary_effective: np.ndarray
    primary_effective: np.ndarray


def _explicit_channels(
    rng: np.random.Generator,
    n_primary: int,
    n_secondary: int,
    targets: np.ndarray,
    n_tx: int,
    n_rx: int,
) -> _ExplicitDraw:
    k = targets.shape[1]
    primary_to_primary = np.abs(draw_gaussian((n_primary,), rng)) ** 2

    target_channels = draw_gaussian((n_secondary, k, n_tx), rng)
    signal_matrix = draw_gaussian((n_rx, n_tx), rng)
    own = draw_gaussian((n_secondary, n_tx), rng)
    if n_secondary:
        own[0] = signal_matrix[0]
    beamformers, _ = beamformers_for_targets(target_channels, own)

    # Channel to the typical primary receiver is the nulled row when targeted
    toward_origin = draw_gaussian((n_secondary, n_tx), rng)
    hits = np.argwhere(targets == 0)
    toward_origin[hits[:, 0]] = target_channels[hits[:, 0], hits[:, 1]]
    to_primary = np.abs(np.einsum("bi,bi->b", toward_origin, beamformers)) ** 2
    surrogate = draw_gaussian((n_secondary, n_tx), rng)
    surrogate_gain = np.abs(np.einsum("bi,bi->b", surrogate, beamformers)) ** 2
    to_primary_unnulled = np.where(np.any(targets == 0, axis=1), surrogate_gain, to_primary)

    cross = draw_gaussian((n_secondary, n_rx, n_tx), rng)
    secondary_effective = np.einsum("bij,bj->bi", cross, beamformers)
    primary_effective = draw_gaussian((n_primary, n_rx), rng)
    return _ExplicitDraw(
        primary_to_primary=primary_to_primary,
        to_primary=to_primary,
        to_primary_unnulled=to_primary_unnulled,
        beamformers=beamformers,
        target_channels=target_channels,
        signal_matrix=signal_matrix,
        secondary_effective=secondary_effective,
        primary_effective=primary_effective,
    )


def _secondary_process(
    config: ScenarioConfig,
    region: Region,
    rng: np.random.Generator,
    dominating_lambda_s: Optional[float],
) -> Tuple[PointSample, PointSample, np.ndarray]:
    """(dominating sample, thinned sample, retained mask)."""
    dominating = config.lambda_s if dominating_lambda_s is None else dominating_lambda_s
    if dominating < config.lambda_s:
        raise ParameterError(
            f"dominating intensity {dominating} is below lambda_s={config.lambda_s}"
        )
    sample = displace_receivers(
        sample_ppp(dominating, region, rng, Network.SECONDARY), config.d_s, rng
    )
    if dominating_lambda_s is None or dominating == 0:
        return sample, sample, np.ones(len(sample), dtype=bool)
    access = AccessConfig(access_probability=min(1.0, config.lambda_s / dominating))
    thinned, keep = thin_with_mask(sample, access, rng)
    return sample, thinned, keep


def realize(
    config: ScenarioConfig,
    region: Region,
    rng: np.random.Generator,
    regime: Regime,
    *,
    channel_model: ChannelModel = ChannelModel.MARGINAL,
    cancel_mode: CancelMode = CancelMode.EXACT_SET,
    dominating_lambda_s: Optional[float] = None,
) -> DeploymentRealization:
    """Draw one deployment with both typical pairs and all required gains.

    When ``dominating_lambda_s`` is given, the secondary network is sampled
    at that intensity and thinned to ``lambda_s`` with per-point uniforms
    drawn from ``rng``; every per-point random quantity is drawn before the
    thinning so that realizations at different ``lambda_s`` are coupled.

    Raises:
        ParameterError: On regime/antenna mismatch or a link longer than the region
    """
    regime = Regime(regime)
    k, m = config.dof(regime)
    has_secondary = regime != Regime.BASELINE
    n_tx = config.N if has_secondary else 1
    n_rx = config.M if has_secondary else 1

    tx_p, rx_p = _typical_pair(config.d_p, region, rng, Network.PRIMARY)
    primary = _with_typical(
        displace_receivers(sample_ppp(config.lambda_p, region, rng), config.d_p, rng),
        tx_p,
        rx_p,
        Network.PRIMARY,
    )

    if has_secondary:
        tx_s, rx_s = _typical_pair(config.d_s, region, rng, Network.SECONDARY)
        dominating, thinned, keep = _secondary_process(
            config, region, rng, dominating_lambda_s
        )
        transmitters = np.vstack((tx_s, dominating.points))
        secondary = _with_typical(thinned, tx_s, rx_s, Network.SECONDARY)
        keep = np.concatenate(([True], keep))
    else:
        transmitters = np.zeros((0, 2))
        secondary = PointSample.empty(region, Network.SECONDARY)
        keep = np.zeros(0, dtype=bool)

    # Targets and gains cover the dominating set; keep selects the thinned rows
    assert primary.receivers is not None
    targets = nulling_targets_for(transmitters, primary.receivers, k)
    n_primary, n_secondary = len(primary), transmitters.shape[0]
    targeted = np.any(targets == 0, axis=1) if k else np.zeros(n_secondary, bool)

    beamformers = target_channels = None
    combiner: Optional[Combiner] = None
    if channel_model == ChannelModel.MARGINAL:
        signal_shape = n_tx - k if regime in (Regime.SISO, Regime.MISO) else n_rx - m
        draw = _marginal_channels(rng, n_primary, n_secondary, targeted, signal_shape)
        explicit = None
    else:
        explicit = _explicit_channels(rng, n_primary, n_secondary, targets, n_tx, n_rx)
        draw = None

    targets = targets[keep] if has_secondary else targets
    canceled_primary, canceled_secondary = cancelation_set(
        primary, secondary, m if has_secondary else 0
    )

    if draw is not None:
        channels = ChannelDraw(
            primary_to_primary=draw.primary_to_primary,
            secondary_to_primary=draw.secondary_to_primary[keep],
            secondary_to_primary_unnulled=draw.secondary_to_primary_unnulled[keep],
            secondary_signal=draw.secondary_signal,
            secondary_to_secondary=np.where(
                canceled_secondary, 0.0, draw.secondary_to_secondary[keep]
            ),
            primary_to_secondary=np.where(
                canceled_primary, 0.0, draw.primary_to_secondary
            ),
        )
    else:
        assert explicit is not None
        channels, combiner = _combine_explicit(
            explicit, keep, canceled_primary, canceled_secondary, has_secondary
        )
        beamformers = explicit.beamformers[keep] if has_secondary else None
        target_channels = explicit.target_channels[keep] if has_secondary else None

    return DeploymentRealization(
        config=config,
        regime=regime,
        region=region,
        channel_model=ChannelModel(channel_model),
        cancel_mode=CancelMode(cancel_mode),
        primary=primary,
        secondary=secondary,
        k=k,
        m=m if has_secondary else 0,
        nulling_targets=targets,
        canceled_primary=canceled_primary,
        canceled_secondary=canceled_secondary,
        channels=channels,
        beamformers=beamformers,
        target_channels=target_channels,
        combiner=combiner,
    )


def _combine_explicit(
    explicit: _ExplicitDraw,
    keep: np.ndarray,
    canceled_primary: np.ndarray,
    canceled_secondary: np.ndarray,
    has_secondary: bool,
) -> Tuple[ChannelDraw, Optional[Combiner]]:
    if not has_secondary:
        return (
            ChannelDraw(
                primary_to_primary=explicit.primary_to_primary,
                secondary_to_primary=np.zeros(0),
                secondary_to_primary_unnulled=np.zeros(0),
                secondary_signal=0.0,
                secondary_to_secondary=np.zeros(0),
                primary_to_secondary=np.zeros(len(explicit.primary_to_primary)),
            ),
            None,
        )

    secondary_effective = explicit.secondary_effective[keep]
    n_rx = explicit.signal_matrix.shape[0]
    signal = explicit.signal_matrix @ explicit.beamformers[0]
    canceled = np.vstack(
        (
            explicit.primary_effective[canceled_primary],
            secondary_effective[canceled_secondary],
        )
    )
    basis = combiner_basis(canceled, n_rx)
    combiner = receive_combiner(signal, basis, canceled)
    t = combiner.vector

    return (
        ChannelDraw(
            primary_to_primary=explicit.primary_to_primary,
            secondary_to_primary=explicit.to_primary[keep],
            secondary_to_primary_unnulled=explicit.to_primary_unnulled[keep],
            secondary_signal=combiner.gain,
            secondary_to_secondary=np.abs(secondary_effective @ np.conj(t)) ** 2,
            primary_to_secondary=np.abs(explicit.primary_effective @ np.conj(t)) ** 2,
        ),
        combiner,
    )
