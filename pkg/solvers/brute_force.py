"""
Exhaustive minimization over all 2^N spin assignments.

Assignments are visited in basis-index order (see core.hamiltonian), which
is lexicographic order with +1 before -1. Among equal minima the lowest
index is reported.
"""

import logging
import time
from typing import Optional

import numpy as np

from config import config
from core.dataset import spins_from_indices
from core.errors import ProblemTooLargeError
from core.polynomial import SpinPolynomial, evaluate_batch
from solvers.result import SolveResult

logger = logging.getLogger(__name__)

_BLOCK = 1 << 16


def _tolerance(energy: float, rtol: float) -> float:
    return rtol * max(1.0, abs(energy))


def brute_force(
    poly: SpinPolynomial,
    max_vars: Optional[int] = None,
    return_minimizers: bool = False,
) -> SolveResult:
    """
    Global minimum of a spin polynomial by enumeration.

    A spin-flip symmetric polynomial (only even-length tuples) is enumerated
    over z_0 = +1 only; the mirrored half has identical energies.

    Args:
        poly: Polynomial to minimize
        max_vars: Hard cap on num_vars (default from solver_config.yaml)
        return_minimizers: Also collect every minimizer (capped separately)

    Returns:
        SolveResult with the lowest-index minimizer

    Raises:
        ProblemTooLargeError: if num_vars exceeds either cap
    """
    settings = config.get_solver_config('brute_force')
    if max_vars is None:
        max_vars = int(settings.get('max_vars', 24))
    rtol = float(settings.get('tie_rtol', 1e-9))
    n = poly.num_vars
    if n > max_vars:
        raise ProblemTooLargeError(
            f"brute force over {n} variables needs 2^{n} evaluations; limit is {max_vars}"
        )
    minimizer_cap = int(settings.get('max_minimizer_vars', 16))
    if return_minimizers and n > minimizer_cap:
        raise ProblemTooLargeError(
            f"full minimizer sets are limited to {minimizer_cap} variables, got {n}"
        )

    start_time = time.perf_counter()
    symmetric = n >= 1 and poly.is_spin_flip_symmetric()
    total = 1 << (n - 1 if symmetric else n)

    best_energy = np.inf
    best_index = 0
    kept_energies = [] if return_minimizers else None
    for start in range(0, total, _BLOCK):
        stop = min(total, start + _BLOCK)
        energies = evaluate_batch(poly, spins_from_indices(np.arange(start, stop), n))
        if kept_energies is not None:
            kept_energies.append(energies)
        block_min = float(energies.min())
        if start == 0 or block_min < best_energy - _tolerance(best_energy, rtol):
            tied = np.flatnonzero(energies <= block_min + _tolerance(block_min, rtol))
            best_index = start + int(tied[0])
            best_energy = float(energies[tied[0]])

    best = spins_from_indices([best_index], n)[0]
    best.setflags(write=False)

    minimizers = None
    if kept_energies is not None:
        energies = np.concatenate(kept_energies)
        found = np.flatnonzero(energies <= best_energy + _tolerance(best_energy, rtol))
        if symmetric:
            mirrored = ((1 << n) - 1) - found
            found = np.union1d(found, mirrored)
        minimizers = spins_from_indices(found, n)
        minimizers.setflags(write=False)

    elapsed = time.perf_counter() - start_time
    logger.debug(
        "brute force: %d vars, %d evaluations, symmetric=%s, min=%.6g (%.3fs)",
        n, total, symmetric, best_energy, elapsed,
    )
    return SolveResult(
        best_assignment=best,
        best_energy=best_energy,
        num_evaluations=total,
        method="brute_force",
        symmetric=symmetric,
        minimizers=minimizers,
        elapsed=elapsed,
    )
