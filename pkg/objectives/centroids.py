"""
Cluster counts, centroids and the l(mu, z, s) distance function.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from core.dataset import Dataset, as_spins
from core.errors import ConfigError, DataError


class ObjectiveKind(str, Enum):
    """Centroid-based binary clustering objectives"""

    WEIGHTED_MAXCUT = "weighted_maxcut"
    INTRA = "intra"
    INTRA_STAR = "intra_star"
    INTER = "inter"
    COMBINED = "combined"

    @classmethod
    def parse(cls, name) -> "ObjectiveKind":
        """Accept enum members, values and common spellings (intra*, maxcut, IntraStar)"""
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("-", "_").replace(" ", "_")
        aliases = {
            "intra*": "intra_star",
            "intrastar": "intra_star",
            "maxcut": "weighted_maxcut",
            "weightedmaxcut": "weighted_maxcut",
            "intra_inter": "combined",
            "intra_inter_combined": "combined",
        }
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            valid = ", ".join(k.value for k in cls)
            raise ConfigError(f"unknown objective '{name}'; choose from {valid}") from None

    @property
    def label(self) -> str:
        """Column heading used in result tables"""
        return {
            ObjectiveKind.WEIGHTED_MAXCUT: "Weighted MaxCut",
            ObjectiveKind.INTRA: "Intra",
            ObjectiveKind.INTRA_STAR: "Intra*",
            ObjectiveKind.INTER: "Inter",
            ObjectiveKind.COMBINED: "Intra-Inter combined",
        }[self]


@dataclass(frozen=True, eq=False)
class CentroidPair:
    """
    Centroids of the +1 and -1 clusters.

    A centroid is None when its cluster is empty.
    """

    mu_plus: Optional[np.ndarray]
    mu_minus: Optional[np.ndarray]
    n_plus: int
    n_minus: int

    @property
    def plus_empty(self) -> bool:
        return self.n_plus == 0

    @property
    def minus_empty(self) -> bool:
        return self.n_minus == 0

    def separation(self) -> float:
        """||mu_+ - mu_-||_2; undefined when a cluster is empty"""
        if self.plus_empty or self.minus_empty:
            raise DataError("centroid separation needs both clusters non-empty")
        return float(np.linalg.norm(self.mu_plus - self.mu_minus))


def counts(z) -> Tuple[int, int]:
    """(N_+, N_-) for a spin assignment"""
    spins = as_spins(z)
    n_plus = int(np.count_nonzero(spins > 0))
    return n_plus, int(spins.shape[0]) - n_plus


def centroids(data: Dataset, z) -> CentroidPair:
    """Arithmetic means of the two clusters, with an empty marker instead of 0/0"""
    spins = as_spins(z, data.num_points)
    plus = spins > 0
    n_plus, n_minus = int(plus.sum()), int((~plus).sum())
    mu_plus = data.points[plus].mean(axis=0) if n_plus else None
    mu_minus = data.points[~plus].mean(axis=0) if n_minus else None
    return CentroidPair(mu_plus, mu_minus, n_plus, n_minus)


def distance_l(data: Dataset, mu: np.ndarray, z, s: int) -> float:
    """
    l(mu, z, s) = sum_i ||x_i - mu||^2 (1 + s z_i) / 2

    Selects the +1 cluster for s = +1 and the -1 cluster for s = -1.
    """
    if s not in (1, -1):
        raise DataError(f"s must be +1 or -1, got {s}")
    spins = as_spins(z, data.num_points)
    mu = np.asarray(mu, dtype=np.float64)
    if mu.shape != (data.num_features,) or not np.all(np.isfinite(mu)):
        raise DataError(f"mu must be a finite vector of length {data.num_features}")
    selected = (1 + s * spins.astype(np.int64)) // 2
    squared = np.sum((data.points - mu) ** 2, axis=1)
    return float(squared @ selected)
