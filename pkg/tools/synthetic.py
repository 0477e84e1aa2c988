"""
Seeded Gaussian-mixture datasets with construction labels.

The default spec (experiments_config.yaml) is a pair of overlapping
unit-variance clusters in the plane.
"""

import logging
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from config import config
from core.dataset import Dataset
from core.errors import DataError

logger = logging.getLogger(__name__)


class GaussianSpec(BaseModel):
    """Per-cluster means, covariances and sample counts plus one seed"""

    name: str = "gaussian"
    means: List[List[float]]
    covariances: List[List[List[float]]]
    counts: List[int]
    seed: int = Field(default=0, ge=0)

    @field_validator('counts')
    @classmethod
    def _check_counts(cls, v: List[int]) -> List[int]:
        if not v or any(c < 1 for c in v):
            raise ValueError(f"every cluster needs at least one sample, got {v}")
        return v

    @model_validator(mode='after')
    def _check_shapes(self) -> 'GaussianSpec':
        k = len(self.means)
        if k == 0 or len(self.covariances) != k or len(self.counts) != k:
            raise ValueError("means, covariances and counts must have one entry per cluster")
        d = len(self.means[0])
        if d == 0 or any(len(m) != d for m in self.means):
            raise ValueError("all means must have the same positive dimension")
        for c, cov in enumerate(self.covariances):
            matrix = np.asarray(cov, dtype=np.float64)
            if matrix.shape != (d, d):
                raise ValueError(f"covariance {c} must be {d}x{d}, got shape {matrix.shape}")
            if not np.allclose(matrix, matrix.T):
                raise ValueError(f"covariance {c} is not symmetric")
            if np.linalg.eigvalsh(matrix).min() < -1e-10 * max(1.0, np.abs(matrix).max()):
                raise ValueError(f"covariance {c} is not positive semi-definite")
        return self

    @classmethod
    def from_config(cls, **overrides) -> 'GaussianSpec':
        """Default spec from experiments_config.yaml with overrides applied"""
        fields = config.get_gaussian_spec()
        fields.update({k: v for k, v in overrides.items() if v is not None})
        try:
            return cls(**fields)
        except ValidationError as e:
            raise DataError(f"invalid Gaussian spec: {e}") from None


def generate_gaussian(spec: Optional[GaussianSpec] = None, **fields) -> Dataset:
    """
    Draw every cluster from its multivariate normal with one generator.

    Args:
        spec: Validated spec; built from fields (or the config default) when None

    Returns:
        Dataset whose labels are the cluster numbers 0..k-1

    Raises:
        DataError: if the spec is invalid (e.g. a non-PSD covariance)
    """
    if spec is None:
        try:
            spec = GaussianSpec(**fields) if fields else GaussianSpec.from_config()
        except ValidationError as e:
            raise DataError(f"invalid Gaussian spec: {e}") from None
    rng = np.random.default_rng(spec.seed)
    blocks, labels = [], []
    for cluster, (mean, cov, count) in enumerate(zip(spec.means, spec.covariances, spec.counts)):
        blocks.append(rng.multivariate_normal(mean, cov, size=count, method='eigh'))
        labels.append(np.full(count, cluster, dtype=np.int64))
    logger.debug("generated %s: %s points per cluster", spec.name, spec.counts)
    return Dataset(points=np.vstack(blocks), labels=np.concatenate(labels), name=spec.name)
