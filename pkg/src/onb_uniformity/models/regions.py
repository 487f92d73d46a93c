"""
Test regions on the unit sphere of R^d or C^d.

Every region is defined through a threshold on a projection statistic and
uses a strict inequality on the defining threshold; boundaries have measure
zero, so this only matters for reproducibility of edge cases such as the
standard basis lying on a halfspace boundary.
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field as dataclass_field
from typing import Callable

import numpy as np
from scipy.special import betainc

from ..core.errors import DimensionMismatchError, DomainError, MeasureUnavailableError
from .field import FieldTag, check_dimension


def real_cap_measure(height: float, d: int) -> float:
    """u({x in S(R^d): x_1 > height}) via the regularized incomplete beta function."""
    if d == 1:
        return 0.5 * (height < 1) + 0.5 * (height < -1)
    if height >= 1:
        return 0.0
    if height <= -1:
        return 1.0
    if height >= 0:
        return float(0.5 * betainc((d - 1) / 2.0, 0.5, 1.0 - height * height))
    return 1.0 - real_cap_measure(-height, d)


def complex_cap_measure(level: float, d: int) -> float:
    """u({z in S(C^d): |z_1|^2 > level}) = (1 - level)^(d - 1)."""
    if level >= 1:
        return 0.0
    if level <= 0:
        return 1.0
    return float((1.0 - level) ** (d - 1))


def _unit_axis(axis, dim: int, field_tag: FieldTag) -> np.ndarray:
    if axis is None:
        vec = np.zeros(dim, dtype=field_tag.dtype)
        vec[0] = 1
        return vec
    vec = np.asarray(axis, dtype=field_tag.dtype)
    if vec.shape != (dim,):
        raise DimensionMismatchError(f"axis of shape {vec.shape} for dimension {dim}")
    norm = np.linalg.norm(vec)
    if norm == 0:
        raise DomainError("region axis must be non-zero")
    return vec / norm


class TestRegion(ABC):
    """Borel subset of the sphere with a deterministic membership predicate."""
    __test__ = False

    dim: int
    field: FieldTag

    @abstractmethod
    def contains(self, points: np.ndarray) -> np.ndarray:
        """Boolean membership for points of shape (..., d)."""

    @abstractmethod
    def measure(self) -> float:
        """Normalized surface measure u(A)."""

    @abstractmethod
    def rotated(self, rotation: np.ndarray) -> TestRegion:
        """The image R(A) = {R x : x in A}."""

    def _check_points(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points)
        if points.shape[-1] != self.dim:
            raise DimensionMismatchError(f"points of dimension {points.shape[-1]} for region in dimension {self.dim}")
        return points


@dataclass(frozen=True, eq=False)
class RealCap(TestRegion):
    dim: int
    height: float
    axis: np.ndarray | None = None
    field: FieldTag = dataclass_field(default=FieldTag.REAL, init=False)

    def __post_init__(self):
        check_dimension(self.dim)
        if not -1.0 <= self.height <= 1.0:
            raise DomainError(f"cap height must lie in [-1, 1], got {self.height}")
        object.__setattr__(self, "axis", _unit_axis(self.axis, self.dim, FieldTag.REAL))

    def contains(self, points):
        points = self._check_points(points)
        return np.real(points @ self.axis) > self.height

    def measure(self):
        return real_cap_measure(self.height, self.dim)

    def rotated(self, rotation):
        return RealCap(self.dim, self.height, rotation @ self.axis)


@dataclass(frozen=True, eq=False)
class ComplexCap(TestRegion):
    dim: int
    level: float
    axis: np.ndarray | None = None
    field: FieldTag = dataclass_field(default=FieldTag.COMPLEX, init=False)

    def __post_init__(self):
        check_dimension(self.dim)
        if not 0.0 <= self.level <= 1.0:
            raise DomainError(f"complex cap level must lie in [0, 1], got {self.level}")
        object.__setattr__(self, "axis", _unit_axis(self.axis, self.dim, FieldTag.COMPLEX))

    def contains(self, points):
        points = self._check_points(points)
        return np.abs(points @ np.conj(self.axis)) ** 2 > self.level

    def measure(self):
        return complex_cap_measure(self.level, self.dim)

    def rotated(self, rotation):
        return ComplexCap(self.dim, self.level, rotation @ self.axis)


@dataclass(frozen=True, eq=False)
class Band(TestRegion):
    """low < s <= high, with s = <axis, x> (real) or |<axis, z>|^2 (complex)."""
    dim: int
    low: float
    high: float
    field: FieldTag = FieldTag.REAL
    axis: np.ndarray | None = None

    def __post_init__(self):
        check_dimension(self.dim)
        object.__setattr__(self, "field", FieldTag(self.field))
        if self.low > self.high:
            raise DomainError(f"band bounds out of order: {self.low} > {self.high}")
        object.__setattr__(self, "axis", _unit_axis(self.axis, self.dim, self.field))

    def statistic(self, points: np.ndarray) -> np.ndarray:
        projection = self._check_points(points) @ np.conj(self.axis)
        if self.field is FieldTag.REAL:
            return np.real(projection)
        return np.abs(projection) ** 2

    def contains(self, points):
        s = self.statistic(points)
        return (s > self.low) & (s <= self.high)

    def _tail(self, threshold: float) -> float:
        if self.field is FieldTag.REAL:
            return real_cap_measure(max(-1.0, min(1.0, threshold)), self.dim)
        return complex_cap_measure(threshold, self.dim)

    def measure(self):
        return self._tail(self.low) - self._tail(self.high)

    def rotated(self, rotation):
        return Band(self.dim, self.low, self.high, self.field, rotation @ self.axis)


@dataclass(frozen=True, eq=False)
class Halfspace(TestRegion):
    """Re<axis, x> > 0."""
    dim: int
    field: FieldTag = FieldTag.REAL
    axis: np.ndarray | None = None

    def __post_init__(self):
        check_dimension(self.dim)
        object.__setattr__(self, "field", FieldTag(self.field))
        object.__setattr__(self, "axis", _unit_axis(self.axis, self.dim, self.field))

    def contains(self, points):
        return np.real(self._check_points(points) @ np.conj(self.axis)) > 0

    def measure(self):
        return 0.5

    def rotated(self, rotation):
        return Halfspace(self.dim, self.field, rotation @ self.axis)


@dataclass(frozen=True, eq=False)
class Complement(TestRegion):
    inner: TestRegion

    @property
    def dim(self) -> int:
        return self.inner.dim

    @property
    def field(self) -> FieldTag:
        return self.inner.field

    def contains(self, points):
        return ~self.inner.contains(points)

    def measure(self):
        return 1.0 - self.inner.measure()

    def rotated(self, rotation):
        return Complement(self.inner.rotated(rotation))


@dataclass(frozen=True, eq=False)
class Custom(TestRegion):
    """Arbitrary predicate; the measure must be supplied or estimated."""
    dim: int
    predicate: Callable[[np.ndarray], np.ndarray]
    known_measure: float | None = None
    field: FieldTag = FieldTag.REAL

    def contains(self, points):
        return np.asarray(self.predicate(self._check_points(points)), dtype=bool)

    def measure(self):
        if self.known_measure is None:
            raise MeasureUnavailableError("Custom region has no supplied measure; estimate it by Monte Carlo")
        return float(self.known_measure)

    def rotated(self, rotation):
        inverse = np.conj(rotation)
        return Custom(self.dim, lambda pts: self.predicate(pts @ inverse), self.known_measure, self.field)


@dataclass
class Partition:
    regions: list[TestRegion]

    def measures(self) -> list[float]:
        return [region.measure() for region in self.regions]

    def check(self, tol: float = 1e-9) -> None:
        total = sum(self.measures())
        if abs(total - 1.0) > tol:
            raise DomainError(f"partition measures sum to {total}, not 1")

    def __len__(self) -> int:
        return len(self.regions)
