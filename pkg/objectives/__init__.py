"""Centroid objectives: raw oracles, closed-form polynomials and moment energies"""

from .builders import (
    build_combined,
    build_inter,
    build_intra,
    build_intra_star,
    build_objective,
    build_weighted_maxcut,
    normalize,
    objective_scale,
)
from .centroids import CentroidPair, ObjectiveKind, centroids, counts, distance_l
from .moments import CentroidMomentEnergy
from .raw import centroid_separation_objective, joint_intra_objective, raw_objective

__all__ = [
    'build_combined',
    'build_inter',
    'build_intra',
    'build_intra_star',
    'build_objective',
    'build_weighted_maxcut',
    'normalize',
    'objective_scale',
    'CentroidPair',
    'ObjectiveKind',
    'centroids',
    'counts',
    'distance_l',
    'CentroidMomentEnergy',
    'centroid_separation_objective',
    'joint_intra_objective',
    'raw_objective',
]
