"""
Direct evaluation of the clustering objectives from centroids.

These are the reference oracles the closed-form builders are checked
against. When a cluster is empty the product N_+- * l(mu_+-, ...) is taken
as 0, which is the value the closed forms produce.
"""

import numpy as np

from core.dataset import Dataset, as_spins
from objectives.centroids import ObjectiveKind, centroids, distance_l


def _l_or_zero(data: Dataset, mu, z, s: int) -> float:
    return 0.0 if mu is None else distance_l(data, mu, z, s)


def raw_objective(kind, data: Dataset, z) -> float:
    """
    Objective value of one assignment evaluated straight from its centroids.

    Args:
        kind: ObjectiveKind or its name
        data: Dataset with N points
        z: Spin assignment of length N

    Returns:
        Intra:      N+^2 l(mu+, z, +1) + N-^2 l(mu-, z, -1)
        IntraStar:  N+ l(mu+, z, +1) + N- l(mu-, z, -1)
        Inter:      -N+^2 N-^2 [l(mu-, z, +1) + l(mu+, z, -1)]
        Combined:   N+^2 N-^2 [l(mu+,z,+1) + l(mu-,z,-1) - l(mu-,z,+1) - l(mu+,z,-1)]
        WeightedMaxCut: sum_{i<j} ||x_i - x_j|| z_i z_j
    """
    kind = ObjectiveKind.parse(kind)
    spins = as_spins(z, data.num_points)

    if kind is ObjectiveKind.WEIGHTED_MAXCUT:
        diff = data.points[:, None, :] - data.points[None, :, :]
        dist = np.sqrt(np.sum(diff ** 2, axis=2))
        zf = spins.astype(np.float64)
        return float(0.5 * zf @ dist @ zf)

    pair = centroids(data, spins)
    n_p, n_m = pair.n_plus, pair.n_minus

    if kind is ObjectiveKind.INTRA:
        return (
            n_p ** 2 * _l_or_zero(data, pair.mu_plus, spins, 1)
            + n_m ** 2 * _l_or_zero(data, pair.mu_minus, spins, -1)
        )
    if kind is ObjectiveKind.INTRA_STAR:
        return (
            n_p * _l_or_zero(data, pair.mu_plus, spins, 1)
            + n_m * _l_or_zero(data, pair.mu_minus, spins, -1)
        )

    if n_p == 0 or n_m == 0:
        return 0.0
    factor = float(n_p ** 2 * n_m ** 2)
    cross = distance_l(data, pair.mu_minus, spins, 1) + distance_l(data, pair.mu_plus, spins, -1)
    if kind is ObjectiveKind.INTER:
        return -factor * cross
    own = distance_l(data, pair.mu_plus, spins, 1) + distance_l(data, pair.mu_minus, spins, -1)
    return factor * (own - cross)


def joint_intra_objective(data: Dataset, z) -> float:
    """
    N+^2 N-^2 [l(mu+, z, +1) + l(mu-, z, -1)], one shared size factor.

    Non-negative and 0 whenever a cluster is empty, so its minimum is the
    useless single-cluster assignment. Kept as a reference only; Intra and
    IntraStar scale each cluster by its own size instead.
    """
    spins = as_spins(z, data.num_points)
    pair = centroids(data, spins)
    if pair.plus_empty or pair.minus_empty:
        return 0.0
    within = distance_l(data, pair.mu_plus, spins, 1) + distance_l(data, pair.mu_minus, spins, -1)
    return float(pair.n_plus ** 2 * pair.n_minus ** 2) * within


def centroid_separation_objective(data: Dataset, z) -> float:
    """-N N+^2 N-^2 ||mu+ - mu-||^2, the Combined objective written through its centroids"""
    pair = centroids(data, as_spins(z, data.num_points))
    if pair.plus_empty or pair.minus_empty:
        return 0.0
    gap = pair.mu_plus - pair.mu_minus
    return -float(data.num_points * pair.n_plus ** 2 * pair.n_minus ** 2 * (gap @ gap))
