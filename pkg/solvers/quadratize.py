"""
Reduction of higher-order spin polynomials to binary quadratic forms.

The polynomial is rewritten over y = (1 + z) / 2, then the most frequent
product y_i y_j inside terms of degree > 2 is repeatedly replaced by a
fresh auxiliary w, adding M (y_i y_j - 2 y_i w - 2 y_j w + 3 w). That
penalty is 0 when w = y_i y_j and at least M otherwise.
"""

import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Tuple

import numpy as np

from config import config
from core.dataset import basis_index, spins_from_indices
from core.errors import ConstraintError, ProblemTooLargeError
from core.polynomial import BinaryQuadraticForm, SpinPolynomial, evaluate_batch, spin_to_binary

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]


@dataclass(frozen=True)
class VariableMap:
    """
    Auxiliary definitions of a quadratized form.

    Variables 0..num_original-1 are the original ones; auxiliaries[w] = (i, j)
    records that w stands for y_i y_j.
    """

    num_original: int
    auxiliaries: Dict[int, Tuple[int, int]] = field(default_factory=dict)
    penalty: float = 0.0

    @property
    def num_vars(self) -> int:
        return self.num_original + len(self.auxiliaries)

    def project(self, y) -> np.ndarray:
        """Drop auxiliaries"""
        return np.asarray(y)[..., :self.num_original]

    def extend(self, y) -> np.ndarray:
        """Fill every auxiliary with its defining product"""
        full = np.zeros(self.num_vars, dtype=np.int64)
        full[:self.num_original] = np.asarray(y)[:self.num_original]
        for w in sorted(self.auxiliaries):
            i, j = self.auxiliaries[w]
            full[w] = full[i] * full[j]
        return full


def _to_binary_monomials(poly: SpinPolynomial) -> Tuple[float, Dict[Monomial, float]]:
    """Expand prod_{i in T} (2 y_i - 1) for every term; returns (offset, monomials)"""
    offset = poly.constant
    monomials: Dict[Monomial, float] = defaultdict(float)
    for term, coef in poly.terms.items():
        k = len(term)
        for size in range(k + 1):
            weight = coef * (2.0 ** size) * (-1.0) ** (k - size)
            for subset in combinations(term, size):
                if subset:
                    monomials[subset] += weight
                else:
                    offset += weight
    return offset, {m: c for m, c in monomials.items() if c != 0.0}


def default_quadratization_penalty(poly: SpinPolynomial) -> float:
    """
    M = factor x max-abs coefficient x number of terms, both taken over the binary expansion.

    M then exceeds the sum of all binary coefficients, the most any set of
    violated substitutions can gain.
    """
    factor = float(config.get_solver_config('quadratization').get('penalty_factor', 2.0))
    _, monomials = _to_binary_monomials(poly)
    scale = max((abs(c) for c in monomials.values()), default=1.0)
    return factor * scale * max(1, len(monomials))


def _most_frequent_pair(monomials: Dict[Monomial, float]) -> Optional[Tuple[int, int]]:
    counter: Counter = Counter()
    for mono in monomials:
        if len(mono) > 2:
            counter.update(combinations(mono, 2))
    if not counter:
        return None
    top = max(counter.values())
    return min(pair for pair, count in counter.items() if count == top)


def quadratize(
    poly: SpinPolynomial, penalty: Optional[float] = None
) -> Tuple[BinaryQuadraticForm, VariableMap]:
    """
    Degree-2 binary form whose minimizers project onto the polynomial's.

    Args:
        poly: Spin polynomial of any degree
        penalty: Substitution penalty M (default_quadratization_penalty when None)

    Returns:
        (form over original plus auxiliary variables, VariableMap)

    Raises:
        ConstraintError: if penalty <= 0
    """
    if poly.degree() <= 2:
        return spin_to_binary(poly), VariableMap(poly.num_vars)
    M = default_quadratization_penalty(poly) if penalty is None else float(penalty)
    if not M > 0:
        raise ConstraintError(f"quadratization penalty must be > 0, got {penalty}")

    offset, monomials = _to_binary_monomials(poly)
    auxiliaries: Dict[int, Tuple[int, int]] = {}
    next_var = poly.num_vars
    while True:
        pair = _most_frequent_pair(monomials)
        if pair is None:
            break
        i, j = pair
        w = next_var
        next_var += 1
        auxiliaries[w] = pair
        reduced: Dict[Monomial, float] = defaultdict(float)
        for mono, coef in monomials.items():
            if len(mono) > 2 and i in mono and j in mono:
                mono = tuple(sorted([k for k in mono if k != i and k != j] + [w]))
            reduced[mono] += coef
        reduced[(i, j)] += M
        reduced[(i, w)] += -2.0 * M
        reduced[(j, w)] += -2.0 * M
        reduced[(w,)] += 3.0 * M
        monomials = {m: c for m, c in reduced.items() if c != 0.0}

    linear = np.zeros(next_var, dtype=np.float64)
    quadratic: Dict[Tuple[int, int], float] = {}
    for mono, coef in monomials.items():
        if len(mono) == 1:
            linear[mono[0]] += coef
        else:
            quadratic[mono] = quadratic.get(mono, 0.0) + coef
    logger.debug(
        "quadratized %d variables with %d auxiliaries (M=%.6g)", poly.num_vars, len(auxiliaries), M
    )
    form = BinaryQuadraticForm(next_var, offset, linear, quadratic)
    return form, VariableMap(poly.num_vars, auxiliaries, M)


@dataclass(frozen=True, eq=False)
class QuadratizationCheck:
    """Brute-force comparison of a polynomial and its quadratized form"""

    sound: bool
    original_minimum: float
    form_minimum: float
    original_minimizers: FrozenSet[int]
    projected_minimizers: FrozenSet[int]

    @property
    def spurious(self) -> FrozenSet[int]:
        """Projected minimizers that do not minimize the original"""
        return self.projected_minimizers - self.original_minimizers


def _binary_energies(form: BinaryQuadraticForm, Y: np.ndarray) -> np.ndarray:
    energies = form.offset + Y @ form.linear
    for (i, j), coef in form.quadratic.items():
        energies += coef * (Y[:, i] * Y[:, j])
    return energies


def _minimizing_rows(energies: np.ndarray, rtol: float) -> np.ndarray:
    low = float(energies.min())
    return np.flatnonzero(energies <= low + rtol * max(1.0, abs(low)))


def verify_quadratization(
    poly: SpinPolynomial,
    form: BinaryQuadraticForm,
    var_map: VariableMap,
    max_vars: Optional[int] = None,
) -> QuadratizationCheck:
    """
    Brute-force both sides and compare minimizers.

    The form is sound when its minimizers, with auxiliaries dropped and
    mapped back to spins, are exactly the polynomial's minimizers and both
    minima agree.

    Raises:
        ProblemTooLargeError: if the form has more than max_vars variables
    """
    settings = config.get_solver_config('quadratization')
    if max_vars is None:
        max_vars = int(settings.get('max_verify_vars', 20))
    if form.num_vars > max_vars:
        raise ProblemTooLargeError(
            f"verification enumerates 2^{form.num_vars} assignments; limit is {max_vars} variables"
        )
    rtol = float(config.get_solver_config('brute_force').get('tie_rtol', 1e-9))
    n = poly.num_vars

    spin_rows = spins_from_indices(np.arange(1 << n), n)
    spin_energies = evaluate_batch(poly, spin_rows)
    original = frozenset(int(b) for b in _minimizing_rows(spin_energies, rtol))

    # y = 1 is spin +1, which is a 0 bit of the basis index
    total = form.num_vars
    bits = spins_from_indices(np.arange(1 << total), total)
    Y = (bits > 0).astype(np.int8)
    form_energies = _binary_energies(form, Y)
    rows = _minimizing_rows(form_energies, rtol)
    projected: List[int] = []
    for row in rows:
        y = var_map.project(Y[row]).astype(np.int64)
        projected.append(basis_index(2 * y - 1))
    projected_set = frozenset(projected)

    original_min = float(spin_energies.min())
    form_min = float(form_energies.min())
    agree = abs(original_min - form_min) <= 1e-6 * max(1.0, abs(original_min))
    return QuadratizationCheck(
        sound=agree and projected_set == original,
        original_minimum=original_min,
        form_minimum=form_min,
        original_minimizers=original,
        projected_minimizers=projected_set,
    )
