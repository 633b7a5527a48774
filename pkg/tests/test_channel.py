"""Tests for fading draws, null spaces, beamformers and combiners."""

import numpy as np
import pytest
from scipy import stats

from cogcap.channel import (
    beamformers_for_targets,
    combiner_basis,
    draw_gaussian,
    draw_gaussian_matrix,
    effective_gain,
    null_space_basis,
    null_space_bases,
    receive_combiner,
    transmit_beamformer,
)
from cogcap.errors import (
    ConditioningError,
    DegenerateChannelError,
    DegreesOfFreedomError,
    DimensionError,
    ParameterError,
)


class TestDrawGaussianMatrix:
    """Tests for CN(0, 1) fading draws."""

    def test_unit_mean_power(self):
        rng = np.random.default_rng(10)
        gains = np.abs(draw_gaussian((100_000,), rng)) ** 2
        assert abs(gains.mean() - 1.0) < 3.0 / np.sqrt(gains.size)

    def test_power_is_exponential(self):
        rng = np.random.default_rng(11)
        gains = np.abs(draw_gaussian((100_000,), rng)) ** 2
        assert stats.kstest(gains, "expon").pvalue > 0.01

    def test_real_and_imaginary_variance_half(self):
        rng = np.random.default_rng(12)
        h = draw_gaussian((100_000,), rng)
        assert np.var(h.real) == pytest.approx(0.5, rel=0.02)
        assert np.var(h.imag) == pytest.approx(0.5, rel=0.02)

    def test_fixed_seed_is_bit_identical(self):
        a = draw_gaussian_matrix(3, 4, np.random.default_rng(5))
        b = draw_gaussian_matrix(3, 4, np.random.default_rng(5))
        assert a.shape == (3, 4)
        np.testing.assert_array_equal(a, b)

    @pytest.mark.parametrize("rows,cols", [(0, 1), (1, 0)])
    def test_rejects_empty_dimensions(self, rows, cols, rng):
        with pytest.raises(ParameterError):
            draw_gaussian_matrix(rows, cols, rng)


class TestNullSpaceBasis:
    """Tests for the orthonormal null-space basis."""

    def test_no_constraints_gives_identity(self):
        basis = null_space_basis(np.zeros((0, 3)))
        np.testing.assert_allclose(basis, np.eye(3))

    def test_single_axis_constraint(self):
        basis = null_space_basis(np.array([[1.0, 0.0]]))
        assert basis.shape == (2, 1)
        assert abs(basis[0, 0]) < 1e-10
        assert abs(abs(basis[1, 0]) - 1.0) < 1e-10

    def test_random_constraints_orthonormal_and_annihilated(self, rng):
        constraints = draw_gaussian_matrix(5, 8, rng)
        basis = null_space_basis(constraints)
        assert basis.shape == (8, 3)
        np.testing.assert_allclose(np.conj(basis.T) @ basis, np.eye(3), atol=1e-10)
        assert np.max(np.abs(constraints @ basis)) < 1e-10

    def test_too_many_constraints(self, rng):
        with pytest.raises(DegreesOfFreedomError):
            null_space_basis(draw_gaussian_matrix(3, 3, rng))

    def test_rank_deficient_constraints(self):
        with pytest.raises(ConditioningError):
            null_space_basis(np.array([[1.0, 0.0, 0.0], [2.0, 0.0, 0.0]]))

    def test_batched_matches_single(self, rng):
        stack = draw_gaussian((4, 2, 5), rng)
        batched = null_space_bases(stack)
        for index in range(4):
            single = null_space_basis(stack[index])
            # Same subspace: projectors agree
            np.testing.assert_allclose(
                batched[index] @ np.conj(batched[index].T),
                single @ np.conj(single.T),
                atol=1e-10,
            )

    def test_wrong_rank_input(self):
        with pytest.raises(DimensionError):
            null_space_basis(np.zeros(3))


class TestTransmitBeamformer:
    """Tests for the nulling transmit beamformer."""

    def test_matched_filter_without_nulling(self, rng):
        q = draw_gaussian((4,), rng)
        beamformer = transmit_beamformer(q, np.eye(4))
        assert beamformer.gain == pytest.approx(np.vdot(q, q).real)
        assert effective_gain(None, q, beamformer) == pytest.approx(beamformer.gain)

    def test_unit_norm_and_residuals(self, rng):
        targets = draw_gaussian_matrix(2, 4, rng)
        q = draw_gaussian((4,), rng)
        beamformer = transmit_beamformer(q, null_space_basis(targets), targets)
        assert np.linalg.norm(beamformer.vector) == pytest.approx(1.0, abs=1e-12)
        assert np.all(beamformer.residuals() < 1e-8)

    def test_degenerate_own_channel(self):
        basis = null_space_basis(np.array([[1.0, 0.0]]))
        with pytest.raises(DegenerateChannelError):
            transmit_beamformer(np.array([1.0, 0.0]), basis)

    def test_empty_basis(self):
        with pytest.raises(DegreesOfFreedomError):
            transmit_beamformer(np.ones(2), np.zeros((2, 0)))

    def test_gain_is_gamma(self):
        rng = np.random.default_rng(20)
        targets = draw_gaussian((10_000, 2, 4), rng)
        own = draw_gaussian((10_000, 4), rng)
        _, gains = beamformers_for_targets(targets, own)
        assert stats.kstest(gains, stats.gamma(2).cdf).pvalue > 0.01

    def test_gain_toward_independent_receiver_is_exponential(self):
        rng = np.random.default_rng(21)
        targets = draw_gaussian((100_000, 2, 4), rng)
        own = draw_gaussian((100_000, 4), rng)
        beamformers, _ = beamformers_for_targets(targets, own)
        g = draw_gaussian((100_000, 4), rng)
        cross = np.abs(np.einsum("bi,bi->b", g, beamformers)) ** 2
        assert stats.kstest(cross, "expon").pvalue > 0.01

    def test_projection_is_optimal(self):
        rng = np.random.default_rng(22)
        targets = draw_gaussian((1000, 2, 5), rng)
        own = draw_gaussian((1000, 5), rng)
        _, gains = beamformers_for_targets(targets, own)
        bases = null_space_bases(targets)
        coefficients = draw_gaussian((1000, 3, 100), rng)
        candidates = np.einsum("bij,bjv->biv", bases, coefficients)
        candidates /= np.linalg.norm(candidates, axis=1, keepdims=True)
        candidate_gains = np.abs(np.einsum("bi,biv->bv", own, candidates)) ** 2
        assert np.all(candidate_gains <= gains[:, None] + 1e-10)

    def test_batched_matches_single(self, rng):
        targets = draw_gaussian((3, 1, 3), rng)
        own = draw_gaussian((3, 3), rng)
        vectors, gains = beamformers_for_targets(targets, own)
        for index in range(3):
            single = transmit_beamformer(own[index], null_space_basis(targets[index]))
            assert gains[index] == pytest.approx(single.gain)
            assert abs(np.vdot(vectors[index], single.vector)) == pytest.approx(1.0)

    def test_batch_mismatch(self, rng):
        with pytest.raises(DimensionError):
            beamformers_for_targets(draw_gaussian((2, 1, 3), rng), draw_gaussian((3, 3), rng))


class TestReceiveCombiner:
    """Tests for the cancelation combiner."""

    def test_maximum_ratio_without_cancelation(self, rng):
        s = draw_gaussian((3,), rng)
        combiner = receive_combiner(s, np.eye(3))
        assert combiner.gain == pytest.approx(np.vdot(s, s).real)

    def test_canceled_channels_annihilated(self, rng):
        canceled = draw_gaussian((2, 4), rng)
        s = draw_gaussian((4,), rng)
        combiner = receive_combiner(s, combiner_basis(canceled, 4), canceled)
        assert np.linalg.norm(combiner.vector) == pytest.approx(1.0, abs=1e-12)
        assert np.all(combiner.residuals() < 1e-8)
        for c in canceled:
            assert effective_gain(combiner, c.reshape(-1, 1), None) < 1e-16

    def test_gain_is_gamma(self):
        rng = np.random.default_rng(30)
        gains = []
        for _ in range(10_000):
            canceled = draw_gaussian((2, 4), rng)
            s = draw_gaussian((4,), rng)
            gains.append(receive_combiner(s, combiner_basis(canceled, 4)).gain)
        assert stats.kstest(gains, stats.gamma(2).cdf).pvalue > 0.01

    def test_gain_from_independent_interferer_is_exponential(self):
        rng = np.random.default_rng(31)
        canceled = draw_gaussian((20_000, 1, 3), rng)
        s = draw_gaussian((20_000, 3), rng)
        combiners, _ = beamformers_for_targets(np.conj(canceled), np.conj(s))
        f = draw_gaussian((20_000, 3), rng)
        cross = np.abs(np.einsum("bi,bi->b", np.conj(combiners), f)) ** 2
        assert stats.kstest(cross, "expon").pvalue > 0.01


class TestEffectiveGain:
    """Tests for |t^H H u|^2."""

    def test_scalar_identity(self):
        assert effective_gain(None, np.array(1.0 + 0j), None) == pytest.approx(1.0)

    def test_full_chain(self, rng):
        t = draw_gaussian((2,), rng)
        u = draw_gaussian((3,), rng)
        channel = draw_gaussian((2, 3), rng)
        expected = abs(np.conj(t) @ channel @ u) ** 2
        assert effective_gain(t, channel, u) == pytest.approx(expected)

    def test_dimension_mismatch(self, rng):
        with pytest.raises(DimensionError):
            effective_gain(draw_gaussian((2,), rng), draw_gaussian((3, 3), rng), None)
