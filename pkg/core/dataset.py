"""
Datasets and spin assignments.
"""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from core.errors import DataError, DimensionMismatchError


@dataclass(frozen=True, eq=False)
class Dataset:
    """
    N x d feature matrix with optional ground-truth class ids.

    Args:
        points: Array-like of shape (N, d); must be finite with N >= 2, d >= 1
        labels: Optional length-N vector of class ids
        name: Free-text tag carried into results
    """

    points: np.ndarray
    labels: Optional[np.ndarray] = None
    name: str = "dataset"

    def __post_init__(self):
        points = np.array(self.points, dtype=np.float64)
        if points.ndim == 1:
            points = points.reshape(-1, 1)
        if points.ndim != 2:
            raise DataError(f"points must be a 2-D matrix, got shape {points.shape}")
        if points.shape[0] < 2 or points.shape[1] < 1:
            raise DataError(f"need N >= 2 and d >= 1, got shape {points.shape}")
        if not np.all(np.isfinite(points)):
            raise DataError("points contain non-finite entries")
        points.setflags(write=False)
        object.__setattr__(self, "points", points)

        if self.labels is not None:
            labels = np.array(self.labels)
            if labels.ndim != 1 or labels.shape[0] != points.shape[0]:
                raise DataError(
                    f"labels must have length {points.shape[0]}, got shape {labels.shape}"
                )
            labels.setflags(write=False)
            object.__setattr__(self, "labels", labels)

    @property
    def num_points(self) -> int:
        return int(self.points.shape[0])

    @property
    def num_features(self) -> int:
        return int(self.points.shape[1])

    @property
    def has_labels(self) -> bool:
        return self.labels is not None

    def subset(self, indices: Sequence[int], name: Optional[str] = None) -> "Dataset":
        """Rows selected by index, labels carried along"""
        idx = np.asarray(indices, dtype=np.int64)
        return Dataset(
            points=self.points[idx],
            labels=None if self.labels is None else self.labels[idx],
            name=name or self.name,
        )

    def with_points(self, points: np.ndarray) -> "Dataset":
        """Same labels and name, new feature matrix"""
        return Dataset(points=points, labels=self.labels, name=self.name)


def as_spins(z, num_vars: Optional[int] = None) -> np.ndarray:
    """
    Validate a spin assignment and return it as a read-only int8 vector.

    Args:
        z: Sequence of -1/+1 entries
        num_vars: Expected length, checked when given

    Returns:
        int8 numpy vector with entries in {-1, +1}
    """
    arr = np.asarray(z)
    if arr.ndim != 1:
        raise DimensionMismatchError(f"spin assignment must be 1-D, got shape {arr.shape}")
    if num_vars is not None and arr.shape[0] != num_vars:
        raise DimensionMismatchError(
            f"spin assignment has length {arr.shape[0]}, expected {num_vars}"
        )
    if not np.all((arr == 1) | (arr == -1)):
        raise DataError("spin assignment entries must be exactly -1 or +1")
    spins = arr.astype(np.int8)
    spins.setflags(write=False)
    return spins


def spins_from_indices(indices, num_vars: int) -> np.ndarray:
    """
    Basis indices to spin rows.

    Bit 0 (the first variable) is the most significant bit; a 0 bit is
    spin +1 and a 1 bit is spin -1 (Z|0> = +|0>, Z|1> = -|1>).
    """
    idx = np.asarray(indices, dtype=np.int64).reshape(-1)
    if num_vars == 0:
        return np.ones((idx.shape[0], 0), dtype=np.int8)
    shifts = np.arange(num_vars - 1, -1, -1, dtype=np.int64)
    bits = (idx[:, None] >> shifts[None, :]) & 1
    return (1 - 2 * bits).astype(np.int8)


def basis_index(z) -> int:
    """Inverse of spins_from_indices for a single assignment"""
    spins = as_spins(z)
    index = 0
    for s in spins:
        index = (index << 1) | (1 if s < 0 else 0)
    return index


def assignment_to_labels(z) -> np.ndarray:
    """Spin assignment to 0/1 cluster labels (+1 -> 0, -1 -> 1)"""
    spins = as_spins(z)
    return (spins < 0).astype(np.int64)

