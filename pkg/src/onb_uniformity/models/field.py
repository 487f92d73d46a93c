"""
Scalar field selection, reproducible random streams and orthonormal bases.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
import numpy.typing as npt

from ..core.errors import InvalidDimensionError

UNIT_NORM_RTOL = 1e-12
ORTHONORMAL_ATOL = 1e-10


class FieldTag(str, Enum):
    """Real (O(d)) or complex (U(d)) setting."""
    REAL = "real"
    COMPLEX = "complex"

    @property
    def dtype(self) -> type:
        return np.float64 if self is FieldTag.REAL else np.complex128

    @property
    def is_complex(self) -> bool:
        return self is FieldTag.COMPLEX


UnitVector = npt.NDArray[np.floating] | npt.NDArray[np.complexfloating]


@dataclass(frozen=True)
class RngStream:
    """
    Counter-style random stream: (seed, stream_index) fully determines the output.

    Trial k of an experiment uses stream_index = k, so scheduling order across
    threads cannot change any result.
    """
    seed: int
    stream_index: int = 0

    def __post_init__(self):
        if not (0 <= self.seed < 2**64) or not (0 <= self.stream_index < 2**64):
            raise ValueError("seed and stream_index must be 64-bit unsigned integers")

    def generator(self) -> np.random.Generator:
        sequence = np.random.SeedSequence(self.seed, spawn_key=(self.stream_index,))
        return np.random.Generator(np.random.Philox(sequence))

    def substream(self, index: int) -> RngStream:
        """Nested stream keyed by (seed, stream_index, index)."""
        sequence = np.random.SeedSequence(self.seed, spawn_key=(self.stream_index,))
        derived = int(sequence.generate_state(1, np.uint64)[0])
        return RngStream(seed=derived, stream_index=index)


def check_dimension(d: int, minimum: int = 1) -> int:
    if not isinstance(d, (int, np.integer)) or d < minimum:
        raise InvalidDimensionError(f"dimension must be an integer >= {minimum}, got {d!r}")
    return int(d)


def inner(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """<x, y> = sum conj(x_i) y_i over the last axis (batched)."""
    return np.sum(np.conj(x) * y, axis=-1)


def is_unit_vector(x: np.ndarray, rtol: float = UNIT_NORM_RTOL) -> bool:
    """True when x, or every row of a stack of vectors, has norm 1 within rtol."""
    norms = np.linalg.norm(np.asarray(x), axis=-1)
    return bool(np.all(np.abs(norms - 1.0) <= rtol))


def is_orthonormal(matrix: np.ndarray, tol: float = ORTHONORMAL_ATOL) -> bool:
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        return False
    gram = matrix.conj().T @ matrix
    return bool(np.max(np.abs(gram - np.eye(matrix.shape[0]))) <= tol)


@dataclass(frozen=True)
class OrthonormalBasis:
    """d unit vectors stored as the columns of a d x d matrix."""
    matrix: np.ndarray
    field: FieldTag = FieldTag.REAL

    def __post_init__(self):
        if not is_orthonormal(self.matrix):
            raise ValueError("matrix columns are not orthonormal within 1e-10")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def vectors(self) -> np.ndarray:
        """Basis vectors as rows, shape (d, d)."""
        return self.matrix.T

    @classmethod
    def standard(cls, d: int, field: FieldTag = FieldTag.REAL) -> OrthonormalBasis:
        return cls(np.eye(check_dimension(d), dtype=field.dtype), field)
