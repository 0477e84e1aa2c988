"""
Diagonal of the Hamiltonian obtained by replacing z_i with Pauli Z_i.

Only the diagonal is ever built; the full 2^N x 2^N operator is not.
Basis index b maps to z_i = +1 when bit i of b is 0 and -1 otherwise, with
bit 0 (the first variable) the most significant, so indices follow tensor
order |z_0 z_1 ... z_{N-1}>.
"""

import logging
from typing import Optional

import numpy as np

from config import config
from core.dataset import spins_from_indices
from core.errors import ProblemTooLargeError
from core.polynomial import SpinPolynomial, evaluate_batch

logger = logging.getLogger(__name__)

_BLOCK = 1 << 16


def hamiltonian_diagonal(poly: SpinPolynomial, max_vars: Optional[int] = None) -> np.ndarray:
    """
    Eigenvalues of the diagonal Hamiltonian in computational-basis order.

    Args:
        poly: Spin polynomial of any degree
        max_vars: Guard against exponential blowup (default from solver_config.yaml)

    Returns:
        float64 vector of length 2^num_vars

    Raises:
        ProblemTooLargeError: if num_vars exceeds the guard
    """
    if max_vars is None:
        max_vars = int(config.get_solver_config('polynomial').get('max_diagonal_vars', 20))
    n = poly.num_vars
    if n > max_vars:
        raise ProblemTooLargeError(
            f"diagonal of {n} variables has 2^{n} entries; limit is {max_vars} variables"
        )
    size = 1 << n
    diagonal = np.empty(size, dtype=np.float64)
    for start in range(0, size, _BLOCK):
        stop = min(size, start + _BLOCK)
        diagonal[start:stop] = evaluate_batch(poly, spins_from_indices(np.arange(start, stop), n))
    logger.debug("built diagonal of %d entries for %d variables", size, n)
    return diagonal
