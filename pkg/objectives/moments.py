"""
Incremental objective evaluation from cluster moments.

The centroid objectives depend on an assignment only through N_+,
S_+ = sum_{z_i=+1} x_i and Q_+ = sum_{z_i=+1} ||x_i||^2, so a single flip
changes the energy in O(d). Annealing uses this when the quartic Inter
polynomial is too large to materialize.
"""

import numpy as np

from core.dataset import Dataset, as_spins
from core.errors import ConfigError
from objectives.centroids import ObjectiveKind


class CentroidMomentEnergy:
    """
    Energy model equal to raw_objective(kind, data, z) for every z.

    Args:
        data: Dataset to cluster
        kind: Any ObjectiveKind except WEIGHTED_MAXCUT
    """

    def __init__(self, data: Dataset, kind):
        self.kind = ObjectiveKind.parse(kind)
        if self.kind is ObjectiveKind.WEIGHTED_MAXCUT:
            raise ConfigError("weighted max-cut is pairwise and has no centroid-moment form")
        self.points = data.points
        self.sq_norms = np.sum(self.points ** 2, axis=1)
        self.num_vars = data.num_points
        self.total_sum = self.points.sum(axis=0)
        self.total_sq = float(self.sq_norms.sum())
        self.z = np.ones(self.num_vars, dtype=np.int8)
        self._n_plus = self.num_vars
        self._s_plus = self.total_sum.copy()
        self._q_plus = self.total_sq
        self.current = self._value(self._n_plus, self._s_plus, self._q_plus)

    def _value(self, n_p: int, s_p: np.ndarray, q_p: float) -> float:
        N = self.num_vars
        n_m = N - n_p
        s_m = self.total_sum - s_p
        q_m = self.total_sq - q_p
        kind = self.kind
        if kind is ObjectiveKind.INTRA_STAR:
            return float((n_p * q_p - s_p @ s_p) + (n_m * q_m - s_m @ s_m))
        if kind is ObjectiveKind.INTRA:
            return float(n_p * (n_p * q_p - s_p @ s_p) + n_m * (n_m * q_m - s_m @ s_m))
        if kind is ObjectiveKind.COMBINED:
            gap = n_m * s_p - n_p * s_m
            return -float(N * (gap @ gap))
        # INTER
        return -float(
            n_p ** 2 * n_m ** 2 * self.total_sq
            - 2.0 * N * n_p * n_m * (s_p @ s_m)
            + n_p ** 3 * (s_m @ s_m)
            + n_m ** 3 * (s_p @ s_p)
        )

    def energy(self, z) -> float:
        """Fresh evaluation, independent of the tracked state"""
        spins = as_spins(z, self.num_vars)
        plus = spins > 0
        return self._value(
            int(plus.sum()), self.points[plus].sum(axis=0), float(self.sq_norms[plus].sum())
        )

    def reset(self, z) -> float:
        """Load a starting assignment; returns its energy"""
        spins = as_spins(z, self.num_vars)
        self.z = spins.copy()
        plus = self.z > 0
        self._n_plus = int(plus.sum())
        self._s_plus = self.points[plus].sum(axis=0)
        self._q_plus = float(self.sq_norms[plus].sum())
        self.current = self._value(self._n_plus, self._s_plus, self._q_plus)
        return self.current

    def _moved(self, i: int):
        sign = -1 if self.z[i] > 0 else 1
        return (
            self._n_plus + sign,
            self._s_plus + sign * self.points[i],
            self._q_plus + sign * self.sq_norms[i],
        )

    def delta(self, i: int) -> float:
        """Energy change of flipping spin i"""
        return self._value(*self._moved(i)) - self.current

    def flip(self, i: int, delta: float) -> None:
        self._n_plus, self._s_plus, self._q_plus = self._moved(i)
        self.z[i] = -self.z[i]
        self.current += delta
