"""
Clustering quality metrics.

Rand index and silhouette come from scikit-learn; the centroid-distance
columns (Dist Centroid, Intra, Inter) are computed here.
"""

import logging
from typing import Dict, Iterable, Optional

import numpy as np
from pydantic import BaseModel, Field
from sklearn.metrics import rand_score, silhouette_score

from config import config
from core.dataset import Dataset
from core.errors import ConfigError, MetricError

logger = logging.getLogger(__name__)

METRIC_COLUMNS = ('rand_index', 'silhouette', 'dist_centroid', 'intra_sum', 'inter_sum')


class MetricsReport(BaseModel):
    """
    Quality of one partition.

    A metric is None when it is undefined for the partition (no ground
    truth, a single non-empty cluster, or fewer than 3 points).
    """

    rand_index: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    silhouette: Optional[float] = Field(default=None, ge=-1.0, le=1.0)
    dist_centroid: Optional[float] = Field(default=None, ge=0.0)
    intra_sum: Optional[float] = Field(default=None, ge=0.0)
    inter_sum: Optional[float] = Field(default=None, ge=0.0)


class MetricSummary(BaseModel):
    """Mean and sample standard deviation of one metric over trials"""

    mean: float
    std: float
    count: int

    def format(self, digits: int = 3) -> str:
        return f"{self.mean:.{digits}f} ± {self.std:.{digits}f}"


def as_labels(pred) -> np.ndarray:
    """Any cluster assignment (spins, ints, strings) to dense labels 0..k-1"""
    pred = np.asarray(pred)
    if pred.ndim != 1:
        raise MetricError(f"cluster assignment must be 1-D, got shape {pred.shape}")
    _, labels = np.unique(pred, return_inverse=True)
    return labels.astype(np.int64)


def rand_index(truth, pred) -> float:
    """
    Fraction of point pairs on which two partitions agree.

    Raises:
        MetricError: if the lengths differ or are below 2
    """
    truth = np.asarray(truth)
    pred = np.asarray(pred)
    if truth.shape != pred.shape or truth.ndim != 1:
        raise MetricError(f"partitions differ in shape: {truth.shape} vs {pred.shape}")
    if truth.shape[0] < 2:
        raise MetricError("rand index needs at least 2 points")
    return float(rand_score(as_labels(truth), as_labels(pred)))


def silhouette(data: Dataset, pred) -> float:
    """
    Mean silhouette with the Euclidean metric; singleton clusters score 0.

    Raises:
        MetricError: if fewer than 2 clusters are non-empty
    """
    labels = as_labels(pred)
    if labels.shape[0] != data.num_points:
        raise MetricError(f"assignment has length {labels.shape[0]}, expected {data.num_points}")
    num_clusters = int(labels.max()) + 1
    if num_clusters < 2:
        raise MetricError("silhouette needs at least 2 non-empty clusters")
    if num_clusters == data.num_points:
        # every point is a singleton
        return 0.0
    score = silhouette_score(data.points, labels, metric='euclidean')
    return float(np.clip(score, -1.0, 1.0))


def auxiliary_metrics(data: Dataset, pred, convention: Optional[str] = None) -> Dict[str, float]:
    """
    Centroid separation and point-to-centroid distance sums.

    dist_centroid is the smallest distance between two centroids, intra_sum
    sums each point's distance to its own centroid and inter_sum its
    distance to the nearest other centroid. With two clusters these are
    ||mu_+ - mu_-||, sum ||x_i - mu_c(i)|| and sum ||x_i - mu_not c(i)||.

    Args:
        convention: "euclidean" (plain distances) or "squared"; defaults to
            metrics.distance_convention in experiments_config.yaml

    Raises:
        MetricError: if fewer than 2 clusters are non-empty
    """
    convention = convention or config.get_distance_convention()
    if convention not in ('euclidean', 'squared'):
        raise ConfigError(f"distance convention must be 'euclidean' or 'squared', got '{convention}'")
    labels = as_labels(pred)
    if labels.shape[0] != data.num_points:
        raise MetricError(f"assignment has length {labels.shape[0]}, expected {data.num_points}")
    k = int(labels.max()) + 1
    if k < 2:
        raise MetricError("centroid metrics need at least 2 non-empty clusters")

    mus = np.stack([data.points[labels == c].mean(axis=0) for c in range(k)])
    to_centroid = np.sqrt(np.sum((data.points[:, None, :] - mus[None, :, :]) ** 2, axis=2))
    if convention == 'squared':
        to_centroid = to_centroid ** 2
    own = to_centroid[np.arange(data.num_points), labels]
    others = to_centroid.copy()
    others[np.arange(data.num_points), labels] = np.inf
    nearest_other = others.min(axis=1)

    gaps = np.sqrt(np.sum((mus[:, None, :] - mus[None, :, :]) ** 2, axis=2))
    gaps[np.diag_indices(k)] = np.inf
    return {
        'dist_centroid': float(gaps.min()),
        'intra_sum': float(own.sum()),
        'inter_sum': float(nearest_other.sum()),
    }


def evaluate_partition(data: Dataset, pred, truth=None, convention: Optional[str] = None) -> MetricsReport:
    """All metrics of one partition; undefined ones are left as None"""
    labels = as_labels(pred)
    if labels.shape[0] != data.num_points:
        raise MetricError(f"assignment has length {labels.shape[0]}, expected {data.num_points}")
    if truth is None and data.has_labels:
        truth = data.labels
    values = {}
    if truth is not None:
        values['rand_index'] = rand_index(truth, labels)
    if labels.max() >= 1:
        if data.num_points >= 3:
            values['silhouette'] = silhouette(data, labels)
        values.update(auxiliary_metrics(data, labels, convention))
    else:
        logger.debug("partition of %s has a single cluster; centroid metrics skipped", data.name)
    return MetricsReport(**values)


def summarize(values: Iterable[float]) -> MetricSummary:
    """Mean and sample standard deviation (std 0 for a single value)"""
    values = np.asarray(list(values), dtype=np.float64)
    if values.size == 0:
        raise MetricError("cannot summarize an empty set of values")
    std = float(values.std(ddof=1)) if values.size > 1 else 0.0
    return MetricSummary(mean=float(values.mean()), std=std, count=int(values.size))


def aggregate_reports(reports: Iterable[MetricsReport]) -> Dict[str, MetricSummary]:
    """Summary per metric, skipping undefined values; a metric never defined is left out"""
    reports = list(reports)
    summary = {}
    for column in METRIC_COLUMNS:
        values = [getattr(r, column) for r in reports if getattr(r, column) is not None]
        if values:
            summary[column] = summarize(values)
    return summary
