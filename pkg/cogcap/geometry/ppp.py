"""
Homogeneous Poisson point processes on a disc.

All operations are pure given an explicit ``numpy.random.Generator``;
samples are immutable after creation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..enums import Network
from ..errors import ParameterError


class Region(BaseModel):
    """Sampling disc centred at the origin."""

    model_config = ConfigDict(frozen=True)

    radius: float = Field(..., gt=0, description="Disc radius (m)")

    @property
    def area(self) -> float:
        return math.pi * self.radius**2


class AccessConfig(BaseModel):
    """Slotted-ALOHA access probability."""

    model_config = ConfigDict(frozen=True)

    access_probability: float = Field(..., ge=0, le=1)

    def active_intensity(self, raw: float) -> float:
        """Intensity of the transmitting subset of a process of intensity ``raw``."""
        return self.access_probability * raw


MARK_DTYPE = "<U9"


def _readonly(array: np.ndarray) -> np.ndarray:
    if array.flags.writeable:
        array.setflags(write=False)
    return array


def _as_xy(values) -> np.ndarray:
    array = np.asarray(values, dtype=float)
    if array.ndim != 2 or array.shape[1] != 2:
        array = array.reshape(-1, 2)
    return array


@dataclass(frozen=True, eq=False)
class PointSample:
    """A realization of a marked planar point process.

    Attributes:
        points: ``(n, 2)`` positions in meters
        marks: ``(n,)`` network membership (``Network`` values)
        region: Region the points were generated in
        receivers: Optional ``(n, 2)`` paired-receiver positions

    Float ``(n, 2)`` arrays are adopted without a copy and made read-only.
    """

    points: np.ndarray
    marks: np.ndarray
    region: Region
    receivers: Optional[np.ndarray] = None
    intensity: float = 0.0

    def __post_init__(self) -> None:
        points = _as_xy(self.points)
        marks = np.asarray(self.marks, dtype=MARK_DTYPE).reshape(-1)
        if marks.shape[0] != points.shape[0]:
            raise ParameterError("marks and points differ in length")
        object.__setattr__(self, "points", _readonly(points))
        object.__setattr__(self, "marks", _readonly(marks))
        if self.receivers is not None:
            receivers = _as_xy(self.receivers)
            if receivers.shape != points.shape:
                raise ParameterError("receivers and points differ in shape")
            object.__setattr__(self, "receivers", _readonly(receivers))

    def __len__(self) -> int:
        return int(self.points.shape[0])

    @property
    def distances(self) -> np.ndarray:
        """Euclidean distance of every point to the origin."""
        return np.hypot(self.points[:, 0], self.points[:, 1])

    def subset(self, mask: np.ndarray) -> "PointSample":
        """Points selected by a boolean mask, receivers kept in step."""
        return PointSample(
            points=self.points[mask],
            marks=self.marks[mask],
            region=self.region,
            receivers=None if self.receivers is None else self.receivers[mask],
            intensity=self.intensity,
        )

    @classmethod
    def empty(
        cls, region: Region, network: Network = Network.PRIMARY
    ) -> "PointSample":
        return cls(
            points=np.zeros((0, 2)),
            marks=np.full(0, Network(network).value, dtype=MARK_DTYPE),
            region=region,
        )


def sample_ppp(
    intensity: float,
    region: Region,
    rng: np.random.Generator,
    network: Network = Network.PRIMARY,
) -> PointSample:
    """Draw a homogeneous PPP on ``region``.

    The count is Poisson with mean ``intensity * area``; positions are i.i.d.
    uniform on the disc.

    Raises:
        ParameterError: If ``intensity`` is negative
    """
    if intensity < 0:
        raise ParameterError(f"intensity must be >= 0 (got {intensity})")
    count = int(rng.poisson(intensity * region.area))
    radii = region.radius * np.sqrt(rng.random(count))
    angles = 2.0 * np.pi * rng.random(count)
    points = np.column_stack((radii * np.cos(angles), radii * np.sin(angles)))
    return PointSample(
        points=points,
        marks=np.full(count, Network(network).value, dtype=MARK_DTYPE),
        region=region,
        intensity=intensity,
    )


def thin(
    sample: PointSample, access: AccessConfig, rng: np.random.Generator
) -> PointSample:
    """Retain each point independently with the access probability."""
    return thin_with_mask(sample, access, rng)[0]


def thin_with_mask(
    sample: PointSample, access: AccessConfig, rng: np.random.Generator
) -> Tuple[PointSample, np.ndarray]:
    """Like :func:`thin`, also returning the boolean mask of retained points.

    One uniform is drawn per point, in point order.
    """
    keep = rng.random(len(sample)) < access.access_probability
    thinned = PointSample(
        points=sample.points[keep],
        marks=sample.marks[keep],
        region=sample.region,
        receivers=None if sample.receivers is None else sample.receivers[keep],
        intensity=access.active_intensity(sample.intensity),
    )
    return thinned, keep


def displace_receivers(
    tx_sample: PointSample, distance: float, rng: np.random.Generator
) -> PointSample:
    """Pair every transmitter with a receiver ``distance`` away in a uniform direction.

    Receivers may land outside the sampling disc; they are kept.

    Raises:
        ParameterError: If ``distance`` is not positive
    """
    if distance <= 0:
        raise ParameterError(f"pairing distance must be > 0 (got {distance})")
    angles = 2.0 * np.pi * rng.random(len(tx_sample))
    offsets = distance * np.column_stack((np.cos(angles), np.sin(angles)))
    return PointSample(
        points=tx_sample.points,
        marks=tx_sample.marks,
        region=tx_sample.region,
        receivers=tx_sample.points + offsets,
        intensity=tx_sample.intensity,
    )


def superpose(a: PointSample, b: PointSample) -> PointSample:
    """Union of two samples on the same region, marks preserved.

    Paired receivers survive only when both inputs carry them.

    Raises:
        ParameterError: If the regions differ
    """
    if a.region != b.region:
        raise ParameterError(
            f"cannot superpose samples from different regions "
            f"({a.region.radius} m vs {b.region.radius} m)"
        )
    receivers = None
    if a.receivers is not None and b.receivers is not None:
        receivers = np.vstack((a.receivers, b.receivers))
    return PointSample(
        points=np.vstack((a.points, b.points)),
        marks=np.concatenate((a.marks, b.marks)),
        region=a.region,
        receivers=receivers,
        intensity=a.intensity + b.intensity,
    )


@dataclass(frozen=True, eq=False)
class NearestResult:
    """Nearest points to a query, ascending by distance."""

    points: np.ndarray
    distances: np.ndarray
    indices: np.ndarray
    short: bool = False

    def __iter__(self) -> Iterator[Tuple[np.ndarray, float]]:
        for point, distance in zip(self.points, self.distances):
            yield point, float(distance)

    def __len__(self) -> int:
        return int(self.indices.shape[0])


def nearest(query: Sequence[float], sample: PointSample, j: int) -> NearestResult:
    """The ``j`` points of ``sample`` closest to ``query``.

    Ties are broken by insertion index. Asking for more points than the
    sample holds returns all of them with ``short`` set.

    Raises:
        ParameterError: If ``j`` is negative
    """
    if j < 0:
        raise ParameterError(f"j must be >= 0 (got {j})")
    q = np.asarray(query, dtype=float).reshape(2)
    offsets = sample.points - q
    distances = np.hypot(offsets[:, 0], offsets[:, 1])
    order = np.argsort(distances, kind="stable")[:j]
    return NearestResult(
        points=sample.points[order],
        distances=distances[order],
        indices=order,
        short=j > len(sample),
    )
