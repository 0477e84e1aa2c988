"""
Exception hierarchy for Hamiltonian clustering.
The CLI maps each family to its own exit code.
"""


class ClusteringError(Exception):
    """Base class for every error raised by this package"""

    exit_code = 1


class DimensionMismatchError(ClusteringError, ValueError):
    """Assignment or feature length does not match the problem size"""

    exit_code = 3


class DataError(ClusteringError, ValueError):
    """Malformed dataset, CSV file, preprocessing mode or generator spec"""

    exit_code = 3


class DegreeError(ClusteringError, ValueError):
    """Operation needs a polynomial of lower degree"""

    exit_code = 4


class ProblemTooLargeError(ClusteringError, ValueError):
    """Exhaustive operation requested on too many variables"""

    exit_code = 4


class SolverError(ClusteringError, RuntimeError):
    """A solver failed or detected an internal inconsistency"""

    exit_code = 4


class ConstraintError(ClusteringError, ValueError):
    """Invalid or infeasible constraint specification"""

    exit_code = 5


class ConfigError(ClusteringError, ValueError):
    """Invalid run configuration or conflicting options"""

    exit_code = 2


class MetricError(ClusteringError, ValueError):
    """Metric undefined for the given partition"""

    exit_code = 3
