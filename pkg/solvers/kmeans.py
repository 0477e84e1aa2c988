"""
Lloyd's k-means baseline (k-means++ seeding, best of n_init runs by WCSS).
"""

import logging
import warnings
from typing import Optional

import numpy as np
from sklearn.cluster import KMeans
from sklearn.exceptions import ConvergenceWarning

from config import config
from core.dataset import Dataset
from core.errors import DataError

logger = logging.getLogger(__name__)


def kmeans_baseline(
    data: Dataset,
    k: int = 2,
    n_init: Optional[int] = None,
    seed: int = 0,
    max_iter: Optional[int] = None,
) -> np.ndarray:
    """
    Hard k-means assignment.

    Args:
        data: Points to cluster
        k: Number of clusters (>= 2)
        n_init: Independent k-means++ starts (default from solver_config.yaml)
        seed: Seed for the starts
        max_iter: Iteration cap per start; iterations also stop once
            assignments no longer change

    Returns:
        Integer labels 0..k-1 of length N

    Raises:
        DataError: if k < 2 or N < k
    """
    settings = config.get_solver_config('kmeans')
    if k < 2 or data.num_points < k:
        raise DataError(f"k-means needs 2 <= k <= N, got k={k} with N={data.num_points}")
    model = KMeans(
        n_clusters=k,
        init='k-means++',
        n_init=int(n_init or settings.get('n_init', 10)),
        max_iter=int(max_iter or settings.get('max_iter', 300)),
        tol=0.0,
        algorithm='lloyd',
        random_state=int(seed) % (2 ** 32),
    )
    with warnings.catch_warnings():
        # duplicate points can leave fewer than k distinct centers
        warnings.simplefilter('ignore', ConvergenceWarning)
        labels = model.fit_predict(data.points)
    logger.debug("k-means k=%d: inertia %.6g after %d iterations", k, model.inertia_, model.n_iter_)
    return labels.astype(np.int64)


def labels_to_spins(labels) -> np.ndarray:
    """Two-cluster labels to spins (label 0 -> +1, anything else -> -1)"""
    labels = np.asarray(labels)
    return np.where(labels == 0, 1, -1).astype(np.int8)
