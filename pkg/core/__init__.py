"""Core data model: datasets, spin polynomials and their evaluation"""

from .dataset import Dataset, as_spins, assignment_to_labels, basis_index, spins_from_indices
from .errors import (
    ClusteringError,
    ConfigError,
    ConstraintError,
    DataError,
    DegreeError,
    DimensionMismatchError,
    MetricError,
    ProblemTooLargeError,
    SolverError,
)
from .hamiltonian import hamiltonian_diagonal
from .polynomial import (
    BinaryQuadraticForm,
    SpinPolynomial,
    binary_to_spin,
    evaluate,
    evaluate_batch,
    spin_to_binary,
)

__all__ = [
    'Dataset',
    'as_spins',
    'assignment_to_labels',
    'basis_index',
    'spins_from_indices',
    'ClusteringError',
    'ConfigError',
    'ConstraintError',
    'DataError',
    'DegreeError',
    'DimensionMismatchError',
    'MetricError',
    'ProblemTooLargeError',
    'SolverError',
    'hamiltonian_diagonal',
    'BinaryQuadraticForm',
    'SpinPolynomial',
    'binary_to_spin',
    'evaluate',
    'evaluate_batch',
    'spin_to_binary',
]
