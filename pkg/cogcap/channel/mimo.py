"""
Rayleigh fading channels, null-space beamformers and receive combiners.

Conventions:
    * Row channels (``g``, ``q``) are ``(N,)`` arrays, column channels
      (``f``, ``Q u``) are ``(M,)`` arrays, matrices are ``(rows, cols)``.
    * A beamformer ``u`` annihilates a target row ``g`` when ``g @ u == 0``.
    * A combiner ``t`` annihilates a column channel ``c`` when ``t^H c == 0``.

Gains are squared magnitudes of unit-power fading coefficients; transmit
powers enter only as prefactors in the SIR expressions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

import numpy as np

from ..errors import (
    ConditioningError,
    DegenerateChannelError,
    DegreesOfFreedomError,
    DimensionError,
    ParameterError,
)

# Relative pivot threshold below which constraint rows count as dependent
RANK_TOLERANCE = 1e-10
# Squared projection norm below which the own channel is degenerate
DEGENERATE_TOLERANCE = 1e-30


def draw_gaussian(shape: Tuple[int, ...], rng: np.random.Generator) -> np.ndarray:
    """i.i.d. CN(0, 1) entries of arbitrary shape."""
    real = rng.standard_normal(shape)
    imag = rng.standard_normal(shape)
    return (real + 1j * imag) / np.sqrt(2.0)


def draw_gaussian_matrix(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """``rows x cols`` matrix of i.i.d. CN(0, 1) fading coefficients.

    Real and imaginary parts each have variance 1/2, so ``E|h|^2 = 1``.

    Raises:
        ParameterError: If a dimension is below 1
    """
    if rows < 1 or cols < 1:
        raise ParameterError(f"matrix dimensions must be >= 1 (got {rows}x{cols})")
    return draw_gaussian((rows, cols), rng)


def _check_rank(r_factors: np.ndarray) -> None:
    diagonals = np.abs(np.diagonal(r_factors, axis1=-2, axis2=-1))
    if diagonals.size == 0:
        return
    scale = diagonals.max(axis=-1, keepdims=True)
    if np.any(scale <= 0) or np.any(diagonals < RANK_TOLERANCE * scale):
        raise ConditioningError("nulling constraints are numerically rank-deficient")


def null_space_bases(constraints: np.ndarray) -> np.ndarray:
    """Batched :func:`null_space_basis` over a ``(batch, j, N)`` stack."""
    constraints = np.asarray(constraints, dtype=complex)
    if constraints.ndim != 3:
        raise DimensionError(f"expected (batch, j, N) stack, got {constraints.shape}")
    batch, j, n = constraints.shape
    if j >= n:
        raise DegreesOfFreedomError(
            f"{j} nulling constraints leave no freedom with {n} antennas"
        )
    if j == 0:
        return np.broadcast_to(np.eye(n, dtype=complex), (batch, n, n)).copy()
    q, r = np.linalg.qr(np.conj(np.swapaxes(constraints, -1, -2)), mode="complete")
    _check_rank(r)
    return q[:, :, j:]


def null_space_basis(constraints: np.ndarray) -> np.ndarray:
    """Orthonormal basis ``S`` (``N x (N-j)``) with ``constraints @ S == 0``.

    Computed from the complete QR factorization of the conjugate-transposed
    constraint rows; the trailing ``N - j`` columns of the unitary factor
    span the null space.

    Args:
        constraints: ``(j, N)`` stacked row channels

    Raises:
        DegreesOfFreedomError: If ``j >= N``
        ConditioningError: If the rows are numerically dependent
    """
    constraints = np.asarray(constraints, dtype=complex)
    if constraints.ndim != 2:
        raise DimensionError(f"expected (j, N) constraints, got {constraints.shape}")
    return null_space_bases(constraints[np.newaxis])[0]


@dataclass(frozen=True, eq=False)
class Beamformer:
    """Unit-norm transmit beamformer and the rows it nulls."""

    vector: np.ndarray
    nulled_targets: np.ndarray = field(
        default_factory=lambda: np.zeros((0, 1), dtype=complex)
    )
    gain: float = 0.0

    def residuals(self) -> np.ndarray:
        """``|g @ u|`` for every nulled target ``g``."""
        if self.nulled_targets.shape[0] == 0:
            return np.zeros(0)
        return np.abs(self.nulled_targets @ self.vector)


@dataclass(frozen=True, eq=False)
class Combiner:
    """Unit-norm receive combiner and the column channels it cancels."""

    vector: np.ndarray
    canceled_channels: np.ndarray = field(
        default_factory=lambda: np.zeros((0, 1), dtype=complex)
    )
    gain: float = 0.0

    def residuals(self) -> np.ndarray:
        """``|t^H c|`` for every canceled channel ``c``."""
        if self.canceled_channels.shape[0] == 0:
            return np.zeros(0)
        return np.abs(self.canceled_channels @ np.conj(self.vector))


def _project(basis: np.ndarray, target: np.ndarray) -> Tuple[np.ndarray, float]:
    coefficients = np.conj(basis.T) @ target
    power = float(np.real(np.vdot(coefficients, coefficients)))
    if power < DEGENERATE_TOLERANCE:
        raise DegenerateChannelError(
            "channel has no component in the allowed subspace"
        )
    return basis @ coefficients / np.sqrt(power), power


def _as_vector(channel: np.ndarray, length: int, name: str) -> np.ndarray:
    vector = np.asarray(channel, dtype=complex).reshape(-1)
    if vector.shape[0] != length:
        raise DimensionError(f"{name} has {vector.shape[0]} entries, expected {length}")
    return vector


def transmit_beamformer(
    own_channel: np.ndarray,
    basis: np.ndarray,
    nulled_targets: Optional[np.ndarray] = None,
) -> Beamformer:
    """Signal-maximizing beamformer inside the null space ``basis``.

    ``u = S S^H q^H / |S^H q^H|`` so that ``|q u|^2 = |S^H q^H|^2``.

    Raises:
        DegreesOfFreedomError: If the basis has no columns
        DegenerateChannelError: If ``q`` is (numerically) orthogonal to ``S``
    """
    basis = np.asarray(basis, dtype=complex)
    if basis.ndim != 2 or basis.shape[1] == 0:
        raise DegreesOfFreedomError("transmit null space is empty")
    q = _as_vector(own_channel, basis.shape[0], "own channel")
    vector, gain = _project(basis, np.conj(q))
    targets = (
        np.zeros((0, basis.shape[0]), dtype=complex)
        if nulled_targets is None
        else np.asarray(nulled_targets, dtype=complex).reshape(-1, basis.shape[0])
    )
    return Beamformer(vector=vector, nulled_targets=targets, gain=gain)


def combiner_basis(canceled_channels: np.ndarray, antennas: int) -> np.ndarray:
    """Orthonormal basis ``R`` of combiners that cancel every given column channel."""
    canceled = np.asarray(canceled_channels, dtype=complex).reshape(-1, antennas)
    return null_space_basis(np.conj(canceled))


def receive_combiner(
    effective_signal: np.ndarray,
    basis: np.ndarray,
    canceled_channels: Optional[np.ndarray] = None,
) -> Combiner:
    """Signal-maximizing combiner inside the cancelation null space ``basis``.

    ``t = R R^H s / |R^H s|`` so that ``|t^H s|^2 = |R^H s|^2``.

    Raises:
        DegreesOfFreedomError: If the basis has no columns
        DegenerateChannelError: If ``s`` is (numerically) orthogonal to ``R``
    """
    basis = np.asarray(basis, dtype=complex)
    if basis.ndim != 2 or basis.shape[1] == 0:
        raise DegreesOfFreedomError("receive null space is empty")
    s = _as_vector(effective_signal, basis.shape[0], "effective signal")
    vector, gain = _project(basis, s)
    canceled = (
        np.zeros((0, basis.shape[0]), dtype=complex)
        if canceled_channels is None
        else np.asarray(canceled_channels, dtype=complex).reshape(-1, basis.shape[0])
    )
    return Combiner(vector=vector, canceled_channels=canceled, gain=gain)


Side = Union[Beamformer, Combiner, np.ndarray, None]


def effective_gain(left: Side, channel: np.ndarray, right: Side) -> float:
    """``|t^H H u|^2`` for a combiner ``t``, channel ``H`` and beamformer ``u``.

    ``None`` on either side stands for the unit scalar (single antenna).

    Raises:
        DimensionError: If the pieces are not conformable
    """
    matrix = np.asarray(channel, dtype=complex)
    if matrix.ndim == 0:
        matrix = matrix.reshape(1, 1)
    elif matrix.ndim == 1:
        matrix = matrix.reshape(1, -1) if left is None else matrix.reshape(-1, 1)
    if matrix.ndim != 2:
        raise DimensionError(f"channel must be a matrix, got shape {matrix.shape}")
    rows, cols = matrix.shape

    if left is None:
        t = np.ones(1, dtype=complex)
    else:
        t = np.asarray(getattr(left, "vector", left), dtype=complex).reshape(-1)
    if right is None:
        u = np.ones(1, dtype=complex)
    else:
        u = np.asarray(getattr(right, "vector", right), dtype=complex).reshape(-1)

    if t.shape[0] != rows or u.shape[0] != cols:
        raise DimensionError(
            f"cannot combine {t.shape[0]}-combiner, {rows}x{cols} channel "
            f"and {u.shape[0]}-beamformer"
        )
    value = np.vdot(t, matrix @ u)
    return float(np.abs(value) ** 2)


def beamformers_for_targets(
    targets: np.ndarray, own: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """Batched nulling beamformers.

    Args:
        targets: ``(n, k, N)`` rows each transmitter must annihilate
        own: ``(n, N)`` channel of each transmitter to its own receiver

    Returns:
        ``(u, gains)`` with ``u`` of shape ``(n, N)`` and ``gains[i] = |own_i u_i|^2``

    Raises:
        DegenerateChannelError: If any own channel has no allowed component
    """
    targets = np.asarray(targets, dtype=complex)
    own = np.asarray(own, dtype=complex)
    if own.ndim != 2 or targets.shape[0] != own.shape[0]:
        raise DimensionError("targets and own channels disagree on batch size")
    if targets.shape[0] == 0:
        return np.zeros((0, own.shape[1]), dtype=complex), np.zeros(0)
    bases = null_space_bases(targets)
    coefficients = np.einsum("bij,bi->bj", np.conj(bases), np.conj(own))
    gains = np.sum(np.abs(coefficients) ** 2, axis=1)
    if np.any(gains < DEGENERATE_TOLERANCE):
        raise DegenerateChannelError(
            "channel has no component in the allowed subspace"
        )
    vectors = np.einsum("bij,bj->bi", bases, coefficients) / np.sqrt(gains)[:, None]
    return vectors, gains
