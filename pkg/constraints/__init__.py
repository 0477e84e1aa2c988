"""Constraint penalties for labeled, cardinality and pairwise constraints"""

from .penalties import (
    Cardinality,
    ConstraintSet,
    Link,
    apply_cardinality,
    apply_constraints,
    apply_labeling,
    apply_links,
    default_penalty,
    derive_links_from_labels,
    satisfies,
)

__all__ = [
    'Cardinality',
    'ConstraintSet',
    'Link',
    'apply_cardinality',
    'apply_constraints',
    'apply_labeling',
    'apply_links',
    'default_penalty',
    'derive_links_from_labels',
    'satisfies',
]
