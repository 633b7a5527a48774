"""Tests for deployment realizations and SIR evaluation."""

import math

import numpy as np
import pytest

from cogcap.enums import CancelMode, ChannelModel, Network, OutageKind, Regime
from cogcap.errors import ParameterError
from cogcap.geometry import (
    AccessConfig,
    PointSample,
    Region,
    displace_receivers,
    nearest,
    sample_ppp,
    superpose,
    thin,
)
from cogcap.harness import estimate_outage
from cogcap.schemas import ScenarioConfig, TrialPlan
from cogcap.sir import (
    ChannelDraw,
    DeploymentRealization,
    canceled_count,
    cancelation_set,
    nulling_targets_for,
    outage_indicators,
    realize,
    sir_baseline,
    sir_from_components,
    sir_primary,
    sir_secondary,
)


def make_realization(
    config: ScenarioConfig,
    regime: Regime,
    primary_points,
    secondary_points,
    *,
    primary_to_primary,
    secondary_to_primary=None,
    secondary_signal=1.0,
    secondary_to_secondary=None,
    primary_to_secondary=None,
    k=0,
    targets=None,
    cancel_mode=CancelMode.EXACT_SET,
) -> DeploymentRealization:
    """Hand-built realization; entry 0 of each network is its typical pair."""
    region = Region(radius=50.0)
    primary_points = np.asarray(primary_points, dtype=float).reshape(-1, 2)
    secondary_points = np.asarray(secondary_points, dtype=float).reshape(-1, 2)
    n_p, n_s = len(primary_points), len(secondary_points)
    primary_receivers = primary_points + np.array([1.0, 0.0])
    primary_receivers[0] = 0.0
    secondary_receivers = secondary_points + np.array([0.0, 1.0])
    if n_s:
        secondary_receivers[0] = 0.0
    unnulled = np.ones(n_s) if secondary_to_primary is None else np.asarray(secondary_to_primary)
    targets = np.zeros((n_s, k), dtype=int) if targets is None else np.asarray(targets)
    targeted = np.any(targets == 0, axis=1) if k else np.zeros(n_s, dtype=bool)
    return DeploymentRealization(
        config=config,
        regime=regime,
        region=region,
        channel_model=ChannelModel.MARGINAL,
        cancel_mode=cancel_mode,
        primary=PointSample(
            points=primary_points,
            marks=np.full(n_p, "primary"),
            region=region,
            receivers=primary_receivers,
        ),
        secondary=PointSample(
            points=secondary_points,
            marks=np.full(n_s, "secondary"),
            region=region,
            receivers=secondary_receivers,
        ),
        k=k,
        m=0,
        nulling_targets=targets,
        canceled_primary=np.zeros(n_p, dtype=bool),
        canceled_secondary=np.zeros(n_s, dtype=bool),
        channels=ChannelDraw(
            primary_to_primary=np.asarray(primary_to_primary, dtype=float),
            secondary_to_primary=np.where(targeted, 0.0, unnulled),
            secondary_to_primary_unnulled=unnulled,
            secondary_signal=secondary_signal,
            secondary_to_secondary=(
                np.ones(n_s) if secondary_to_secondary is None else np.asarray(secondary_to_secondary)
            ),
            primary_to_secondary=(
                np.ones(n_p) if primary_to_secondary is None else np.asarray(primary_to_secondary)
            ),
        ),
    )


@pytest.fixture
def miso_config(preset) -> ScenarioConfig:
    return preset.with_updates(N=4, k=2, lambda_s=0.01)


@pytest.fixture
def mimo_config(preset) -> ScenarioConfig:
    return preset.with_updates(N=4, M=4, m=3, lambda_s=0.01)


class TestSirFromComponents:
    """Tests for the SIR ratio."""

    def test_ratio(self):
        assert sir_from_components(2.0, [0.5, 0.5]) == pytest.approx(2.0)

    def test_no_interference_is_infinite(self):
        assert math.isinf(sir_from_components(1.0, []))
        assert math.isinf(sir_from_components(1.0, [0.0, 0.0]))

    def test_adding_an_interferer_never_increases_sir(self, rng):
        for _ in range(100):
            interference = list(rng.exponential(size=5))
            extra = float(rng.exponential())
            assert sir_from_components(1.0, interference + [extra]) <= sir_from_components(
                1.0, interference
            )


class TestHandBuiltSir:
    """Direct arithmetic on constructed realizations."""

    def test_primary_single_interferer(self, preset):
        config = preset.with_updates(alpha=4.0)
        real = make_realization(
            config,
            Regime.BASELINE,
            [[1.0, 0.0], [2.0, 0.0]],
            np.zeros((0, 2)),
            primary_to_primary=[1.0, 1.0],
        )
        outcome = sir_baseline(real)
        assert outcome.sir == pytest.approx(16.0)
        assert not outcome.unbounded

    def test_secondary_single_primary_interferer(self, preset):
        real = make_realization(
            preset,
            Regime.SISO,
            [[0.0, 1.0], [1.0, 0.0]],
            [[0.0, -1.0]],
            primary_to_primary=[1.0, 1.0],
            primary_to_secondary=[7.0, 1.0],
        )
        outcome = sir_secondary(real)
        assert outcome.sir == pytest.approx(0.5)
        assert outcome.secondary_interference == 0.0

    def test_no_interferers_is_unbounded(self, preset):
        real = make_realization(
            preset, Regime.SISO, [[1.0, 0.0]], [[0.0, 1.0]], primary_to_primary=[1.0]
        )
        assert sir_primary(real).unbounded
        assert sir_secondary(real).unbounded
        assert outage_indicators(real) == (False, False)

    def test_each_sir_ignores_other_typical_pair(self, preset):
        real = make_realization(
            preset,
            Regime.SISO,
            [[1.0, 0.0]],
            [[0.0, 1.0]],
            primary_to_primary=[1.0],
            secondary_to_primary=[50.0],
            primary_to_secondary=[50.0],
        )
        assert sir_primary(real).interference == 0.0
        assert sir_secondary(real).interference == 0.0

    def test_outage_is_strict(self, preset):
        config = preset.with_updates(alpha=4.0, beta_p=16.0)
        real = make_realization(
            config,
            Regime.BASELINE,
            [[1.0, 0.0], [2.0, 0.0]],
            np.zeros((0, 2)),
            primary_to_primary=[1.0, 1.0],
        )
        primary_out, secondary_out = outage_indicators(real)
        assert not primary_out
        assert not secondary_out

    def test_secondary_on_baseline_rejected(self, preset):
        real = make_realization(
            preset, Regime.BASELINE, [[1.0, 0.0]], np.zeros((0, 2)), primary_to_primary=[1.0]
        )
        with pytest.raises(ParameterError):
            sir_secondary(real)


class TestCanceledCount:
    """Tests for the canceled-count rule at a primary receiver."""

    def _realization(self, preset, cancel_mode=CancelMode.EXACT_SET):
        config = preset.with_updates(N=2, k=1, lambda_s=0.01)
        return make_realization(
            config,
            Regime.MISO,
            [[1.0, 0.0], [8.0, 0.0]],
            [[0.0, 1.0], [2.0, 0.0], [3.0, 0.0]],
            primary_to_primary=[1.0, 1.0],
            k=1,
            targets=[[1], [1], [0]],
            cancel_mode=cancel_mode,
        )

    def test_no_nulling_means_zero(self, preset):
        real = make_realization(
            preset,
            Regime.SISO,
            [[1.0, 0.0]],
            [[0.0, 1.0], [2.0, 0.0]],
            primary_to_primary=[1.0],
        )
        assert canceled_count((0.0, 0.0), real, CancelMode.PREFIX) == 0
        assert canceled_count((0.0, 0.0), real, CancelMode.EXACT_SET) == 0

    def test_prefix_stops_at_first_non_nulling_transmitter(self, preset):
        real = self._realization(preset)
        assert canceled_count((0.0, 0.0), real, CancelMode.PREFIX) == 0
        assert canceled_count((0.0, 0.0), real, CancelMode.EXACT_SET) == 1

    def test_exact_set_sir_not_below_prefix(self, preset):
        real = self._realization(preset)
        exact = sir_primary(real, CancelMode.EXACT_SET)
        prefix = sir_primary(real, CancelMode.PREFIX)
        assert exact.sir > prefix.sir
        assert exact.canceled_count == 1
        assert prefix.canceled_count == 0

    def test_unknown_receiver_rejected(self, preset):
        with pytest.raises(ParameterError):
            canceled_count((5.0, 5.0), self._realization(preset), CancelMode.PREFIX)

    def test_prefix_never_exceeds_exact_set(self, preset, region):
        config = preset.with_updates(N=6, k=4, lambda_s=preset.lambda_p)
        for trial in range(200):
            real = realize(config, region, np.random.default_rng(trial), Regime.MISO)
            prefix = canceled_count((0.0, 0.0), real, CancelMode.PREFIX)
            exact = canceled_count((0.0, 0.0), real, CancelMode.EXACT_SET)
            assert prefix <= exact
            assert sir_primary(real, CancelMode.EXACT_SET).sir >= sir_primary(
                real, CancelMode.PREFIX
            ).sir


class TestRealize:
    """Tests for realization assembly."""

    def test_baseline_has_no_secondary(self, preset, region, rng):
        real = realize(preset.with_updates(lambda_s=0.02), region, rng, Regime.BASELINE)
        assert len(real.secondary) == 0
        assert not real.has_secondary

    def test_typical_receivers_at_origin(self, miso_config, region, rng):
        real = realize(miso_config, region, rng, Regime.MISO)
        np.testing.assert_array_equal(real.primary.receivers[0], [0.0, 0.0])
        np.testing.assert_array_equal(real.secondary.receivers[0], [0.0, 0.0])
        assert np.hypot(*real.primary.points[0]) == pytest.approx(miso_config.d_p)
        assert np.hypot(*real.secondary.points[0]) == pytest.approx(miso_config.d_s)

    def test_explicit_beamformers_annihilate_targets(self, miso_config, region, rng):
        real = realize(
            miso_config, region, rng, Regime.MISO, channel_model=ChannelModel.EXPLICIT
        )
        assert real.nulling_targets.shape == (len(real.secondary), 2)
        residuals = np.abs(np.einsum("bki,bi->bk", real.target_channels, real.beamformers))
        assert np.all(residuals < 1e-8)
        norms = np.linalg.norm(real.beamformers, axis=1)
        np.testing.assert_allclose(norms, 1.0, atol=1e-12)

    def test_nulled_origin_gain_vanishes(self, miso_config, region):
        for seed in range(20):
            real = realize(
                miso_config,
                region,
                np.random.default_rng(seed),
                Regime.MISO,
                channel_model=ChannelModel.EXPLICIT,
            )
            gains = real.channels.secondary_to_primary[real.origin_targeted]
            assert np.all(gains < 1e-16)

    def test_nulling_targets_are_nearest_receivers(self, miso_config, region, rng):
        real = realize(miso_config, region, rng, Regime.MISO)
        receivers = real.primary.receivers
        for tx, targets in zip(real.secondary.points, real.nulling_targets):
            distances = np.linalg.norm(receivers - tx, axis=1)
            expected = set(np.argsort(distances)[:2].tolist())
            assert set(targets.tolist()) == expected

    def test_cancelation_set_matches_brute_force(self, mimo_config, region):
        for seed in range(20):
            real = realize(mimo_config, region, np.random.default_rng(seed), Regime.MIMO)
            union = np.vstack((real.primary.points[1:], real.secondary.points[1:]))
            brute = np.argsort(np.linalg.norm(union, axis=1), kind="stable")[:3]
            n_primary = len(real.primary) - 1
            chosen = set(brute.tolist())
            got = set((np.flatnonzero(real.canceled_primary) - 1).tolist()) | set(
                (np.flatnonzero(real.canceled_secondary) - 1 + n_primary).tolist()
            )
            assert got == chosen

    def test_canceled_interferers_contribute_nothing(self, mimo_config, region):
        for model in ChannelModel:
            real = realize(
                mimo_config.with_updates(m=2),
                region,
                np.random.default_rng(3),
                Regime.MIMO,
                channel_model=model,
            )
            assert np.all(real.channels.primary_to_secondary[real.canceled_primary] < 1e-16)
            assert np.all(
                real.channels.secondary_to_secondary[real.canceled_secondary] < 1e-16
            )
            assert sir_secondary(real).canceled_interferers == 2

    def test_link_longer_than_region(self, preset, rng):
        with pytest.raises(ParameterError):
            realize(preset.with_updates(d_p=40.0), Region(radius=30.0), rng, Regime.SISO)

    def test_regime_antenna_mismatch(self, preset, region, rng):
        with pytest.raises(ParameterError):
            realize(preset.with_updates(N=2), region, rng, Regime.SISO)

    def test_same_seed_same_realization(self, miso_config, region):
        a = realize(miso_config, region, np.random.default_rng(8), Regime.MISO)
        b = realize(miso_config, region, np.random.default_rng(8), Regime.MISO)
        np.testing.assert_array_equal(a.secondary.points, b.secondary.points)
        assert sir_primary(a).sir == sir_primary(b).sir

    def test_dominating_process_couples_intensities(self, preset, region):
        dense = preset.with_updates(lambda_s=0.02)
        sparse = preset.with_updates(lambda_s=0.01)
        a = realize(dense, region, np.random.default_rng(9), Regime.SISO, dominating_lambda_s=0.02)
        b = realize(sparse, region, np.random.default_rng(9), Regime.SISO, dominating_lambda_s=0.02)
        np.testing.assert_array_equal(a.primary.points, b.primary.points)
        dense_points = {tuple(p) for p in a.secondary.points}
        assert {tuple(p) for p in b.secondary.points} <= dense_points
        assert len(b.secondary) <= len(a.secondary)

    def test_dominating_process_is_thinned_by_access_probability(self, preset, region):
        config = preset.with_updates(lambda_s=0.01)
        real = realize(
            config, region, np.random.default_rng(12), Regime.SISO, dominating_lambda_s=0.02
        )
        # Replay the draws: primary pair, primary PPP, secondary pair, secondary PPP
        rng = np.random.default_rng(12)
        rng.random()
        displace_receivers(sample_ppp(config.lambda_p, region, rng), config.d_p, rng)
        rng.random()
        dominating = displace_receivers(
            sample_ppp(0.02, region, rng, Network.SECONDARY), config.d_s, rng
        )
        expected = thin(dominating, AccessConfig(access_probability=0.5), rng)
        np.testing.assert_array_equal(real.secondary.points[1:], expected.points)
        np.testing.assert_array_equal(real.secondary.receivers[1:], expected.receivers)
        assert real.secondary.intensity == pytest.approx(0.01)

    def test_dominating_below_intensity_rejected(self, preset, region, rng):
        with pytest.raises(ParameterError):
            realize(
                preset.with_updates(lambda_s=0.02),
                region,
                rng,
                Regime.SISO,
                dominating_lambda_s=0.01,
            )

    def test_scale_invariance(self, miso_config, region):
        scaled = miso_config.with_updates(P_p=miso_config.P_p * 10, P_s=miso_config.P_s * 10)
        for seed in range(10):
            a = realize(miso_config, region, np.random.default_rng(seed), Regime.MISO)
            b = realize(scaled, region, np.random.default_rng(seed), Regime.MISO)
            for f in (sir_primary, sir_secondary):
                sa, sb = f(a).sir, f(b).sir
                if math.isinf(sa):
                    assert math.isinf(sb)
                else:
                    assert sb == pytest.approx(sa, rel=1e-12)


class TestHelpers:
    """Tests for the nulling-target map and cancelation set."""

    def test_nulling_targets_missing_neighbours(self):
        targets = nulling_targets_for(np.zeros((2, 2)), np.array([[1.0, 0.0]]), 3)
        assert targets.shape == (2, 3)
        assert np.all(targets[:, 0] == 0)
        assert np.all(targets[:, 1:] == -1)

    def test_nulling_targets_without_nulling(self):
        assert nulling_targets_for(np.zeros((4, 2)), np.ones((3, 2)), 0).shape == (4, 0)

    @staticmethod
    def _transmitters(points, network):
        points = np.asarray(points, dtype=float)
        return PointSample(
            points=points, marks=np.full(len(points), network), region=Region(radius=10.0)
        )

    def test_cancelation_set_prefers_primary_on_ties(self):
        primary = self._transmitters([[1.0, 0.0], [2.0, 0.0]], "primary")
        secondary = self._transmitters([[0.0, 1.0], [0.0, 2.0]], "secondary")
        canceled_primary, canceled_secondary = cancelation_set(primary, secondary, 1)
        assert canceled_primary.tolist() == [False, True]
        assert canceled_secondary.tolist() == [False, False]

    def test_cancelation_set_never_includes_typical_transmitters(self):
        primary = self._transmitters([[0.1, 0.0], [5.0, 0.0]], "primary")
        secondary = self._transmitters([[0.0, 0.1], [6.0, 0.0]], "secondary")
        canceled_primary, canceled_secondary = cancelation_set(primary, secondary, 2)
        assert not canceled_primary[0] and not canceled_secondary[0]
        assert canceled_primary[1] and canceled_secondary[1]

    def test_cancelation_set_is_nearest_of_union(self, rng):
        region = Region(radius=10.0)
        primary = sample_ppp(0.2, region, rng, Network.PRIMARY)
        secondary = sample_ppp(0.2, region, rng, Network.SECONDARY)
        canceled_primary, canceled_secondary = cancelation_set(primary, secondary, 4)
        union = superpose(
            primary.subset(np.arange(len(primary)) > 0),
            secondary.subset(np.arange(len(secondary)) > 0),
        )
        chosen = nearest((0.0, 0.0), union, 4)
        expected = {tuple(p) for p in chosen.points}
        got = {tuple(p) for p in primary.points[canceled_primary]} | {
            tuple(p) for p in secondary.points[canceled_secondary]
        }
        assert got == expected
        assert canceled_primary.sum() + canceled_secondary.sum() == 4

    def test_cancelation_set_region_mismatch(self):
        primary = PointSample(
            points=np.zeros((2, 2)), marks=np.full(2, "primary"), region=Region(radius=5.0)
        )
        secondary = PointSample(
            points=np.ones((2, 2)), marks=np.full(2, "secondary"), region=Region(radius=6.0)
        )
        with pytest.raises(ParameterError):
            cancelation_set(primary, secondary, 1)


class TestBaselineOutage:
    """Monte Carlo baseline outage against the closed form."""

    def test_short_run_agrees_within_ci(self, preset):
        plan = TrialPlan(trials=4000, master_seed=1)
        estimate = estimate_outage(preset, Regime.BASELINE, OutageKind.BASELINE, plan)
        assert abs(estimate.p_hat - 0.07316) < 4 * estimate.half_width

    @pytest.mark.slow
    def test_long_run_within_half_percent(self, preset):
        plan = TrialPlan(trials=100_000, master_seed=2)
        estimate = estimate_outage(preset, Regime.BASELINE, OutageKind.BASELINE, plan)
        assert abs(estimate.p_hat - 0.07316) <= 0.005
