"""
Sparse multilinear spin polynomials and binary quadratic forms.

A SpinPolynomial stores a_0 plus a map from strictly increasing index
tuples to coefficients, over variables z_i in {-1, +1}. Tuples are
squarefree because z_i^2 = 1; zero coefficients are never stored.
"""

import math
import numbers
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Dict, Iterable, Mapping, Optional, Tuple, Union

import numpy as np

from config import config
from core.dataset import as_spins
from core.errors import DataError, DegreeError, DimensionMismatchError

Term = Tuple[int, ...]
Number = Union[int, float]


def _reduce_tuple(indices: Iterable[int]) -> Term:
    """Sort an index multiset and drop pairs (z_i * z_i = 1)"""
    odd = set()
    for i in indices:
        if i in odd:
            odd.remove(i)
        else:
            odd.add(i)
    return tuple(sorted(odd))


@dataclass(frozen=True)
class SpinPolynomial:
    """
    f(z) = constant + sum_T terms[T] * prod_{i in T} z_i

    Args:
        num_vars: Number of spin variables (data qubits plus auxiliaries)
        constant: The a_0 offset
        terms: Map from strictly increasing index tuples to finite coefficients
    """

    num_vars: int
    constant: float = 0.0
    terms: Mapping[Term, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.num_vars < 0:
            raise DataError(f"num_vars must be non-negative, got {self.num_vars}")
        if not math.isfinite(self.constant):
            raise DataError("constant must be finite")
        clean: Dict[Term, float] = {}
        for key, coef in self.terms.items():
            key = tuple(int(i) for i in key)
            if len(key) == 0:
                raise DataError("the empty tuple is the constant; pass it as constant")
            if any(b <= a for a, b in zip(key, key[1:])):
                raise DataError(f"term {key} is not strictly increasing")
            if key[0] < 0 or key[-1] >= self.num_vars:
                raise DataError(f"term {key} out of range for {self.num_vars} variables")
            coef = float(coef)
            if not math.isfinite(coef):
                raise DataError(f"coefficient of {key} is not finite")
            if coef != 0.0:
                clean[key] = coef
        object.__setattr__(self, "constant", float(self.constant))
        object.__setattr__(self, "terms", MappingProxyType(clean))

    @classmethod
    def from_terms(
        cls,
        num_vars: int,
        terms: Iterable[Tuple[Iterable[int], Number]],
        constant: Number = 0.0,
    ) -> "SpinPolynomial":
        """
        Accumulate (indices, coefficient) pairs into a polynomial.

        Indices may be unsorted and may repeat; repeated indices cancel in
        pairs. Duplicate tuples are summed, then exact zeros are pruned.
        """
        acc: Dict[Term, float] = defaultdict(float)
        const = float(constant)
        for indices, coef in terms:
            key = _reduce_tuple(indices)
            if key:
                acc[key] += float(coef)
            else:
                const += float(coef)
        return cls(num_vars=num_vars, constant=const, terms=acc)

    @classmethod
    def zero(cls, num_vars: int) -> "SpinPolynomial":
        return cls(num_vars=num_vars)

    def degree(self) -> int:
        """Largest tuple length, 0 for a constant-only polynomial"""
        return max((len(t) for t in self.terms), default=0)

    def __len__(self) -> int:
        return len(self.terms)

    def max_abs_coefficient(self) -> float:
        """Largest |coefficient| over non-constant terms (0 if there are none)"""
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def is_spin_flip_symmetric(self) -> bool:
        """True when every stored tuple has even length, so f(z) = f(-z)"""
        return all(len(t) % 2 == 0 for t in self.terms)

    def with_num_vars(self, num_vars: int) -> "SpinPolynomial":
        """Same polynomial over a wider variable set"""
        if num_vars < self.num_vars:
            raise DimensionMismatchError(
                f"cannot shrink polynomial from {self.num_vars} to {num_vars} variables"
            )
        return SpinPolynomial(num_vars, self.constant, dict(self.terms))

    def scaled(self, factor: Number) -> "SpinPolynomial":
        factor = float(factor)
        return SpinPolynomial(
            self.num_vars,
            self.constant * factor,
            {t: c * factor for t, c in self.terms.items()},
        )

    def _check_compatible(self, other: "SpinPolynomial") -> int:
        if not isinstance(other, SpinPolynomial):
            raise TypeError(f"expected SpinPolynomial, got {type(other).__name__}")
        return max(self.num_vars, other.num_vars)

    def __add__(self, other):
        if isinstance(other, numbers.Real):
            return SpinPolynomial(self.num_vars, self.constant + other, dict(self.terms))
        num_vars = self._check_compatible(other)
        acc: Dict[Term, float] = defaultdict(float, self.terms)
        for t, c in other.terms.items():
            acc[t] += c
        return SpinPolynomial(num_vars, self.constant + other.constant, acc)

    __radd__ = __add__

    def __neg__(self):
        return self.scaled(-1.0)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, numbers.Real):
            return self.scaled(other)
        num_vars = self._check_compatible(other)
        left = dict(self.terms)
        right = dict(other.terms)
        if self.constant:
            left[()] = self.constant
        if other.constant:
            right[()] = other.constant
        acc: Dict[Term, float] = defaultdict(float)
        for t1, c1 in left.items():
            s1 = set(t1)
            for t2, c2 in right.items():
                acc[tuple(sorted(s1.symmetric_difference(t2)))] += c1 * c2
        constant = acc.pop((), 0.0)
        return SpinPolynomial(num_vars, constant, acc)

    __rmul__ = __mul__

    def __truediv__(self, other: Number):
        return self.scaled(1.0 / float(other))

    @cached_property
    def term_arrays(self) -> Dict[int, Tuple[np.ndarray, np.ndarray]]:
        """Terms grouped by degree: {degree: (indices (T, degree), coefficients (T,))}"""
        grouped: Dict[int, list] = defaultdict(list)
        for t in sorted(self.terms):
            grouped[len(t)].append(t)
        arrays = {}
        for deg, keys in sorted(grouped.items()):
            idx = np.array(keys, dtype=np.int64).reshape(len(keys), deg)
            coefs = np.array([self.terms[k] for k in keys], dtype=np.float64)
            idx.setflags(write=False)
            coefs.setflags(write=False)
            arrays[deg] = (idx, coefs)
        return arrays

    def quadratic_arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        Dense field and coupling arrays of a degree <= 2 polynomial.

        Returns:
            (h, J) with f(z) = constant + h.z + 0.5 * z.J.z, J symmetric with zero diagonal
        """
        if self.degree() > 2:
            raise DegreeError(f"quadratic arrays need degree <= 2, got {self.degree()}")
        h = np.zeros(self.num_vars, dtype=np.float64)
        J = np.zeros((self.num_vars, self.num_vars), dtype=np.float64)
        arrays = self.term_arrays
        if 1 in arrays:
            idx, coefs = arrays[1]
            np.add.at(h, idx[:, 0], coefs)
        if 2 in arrays:
            idx, coefs = arrays[2]
            J[idx[:, 0], idx[:, 1]] = coefs
            J[idx[:, 1], idx[:, 0]] = coefs
        return h, J

    def __repr__(self) -> str:
        return (
            f"SpinPolynomial(num_vars={self.num_vars}, constant={self.constant!r}, "
            f"terms={len(self.terms)}, degree={self.degree()})"
        )


def evaluate(poly: SpinPolynomial, z) -> float:
    """
    Energy a_0 + sum_T coeff(T) * prod_{i in T} z_i of one assignment.

    Raises:
        DimensionMismatchError: if len(z) != poly.num_vars
    """
    spins = as_spins(z, poly.num_vars)
    energy = poly.constant
    for idx, coefs in poly.term_arrays.values():
        products = np.prod(spins[idx], axis=1, dtype=np.int64)
        energy += float(coefs @ products)
    return float(energy)


def evaluate_batch(poly: SpinPolynomial, Z: np.ndarray, chunk_elements: Optional[int] = None) -> np.ndarray:
    """
    Energies of a block of assignments.

    Args:
        poly: Polynomial to evaluate
        Z: Array (B, num_vars) of +-1 entries
        chunk_elements: Cap on B x terms evaluated at once

    Returns:
        float64 vector of length B
    """
    Z = np.asarray(Z)
    if Z.ndim != 2 or Z.shape[1] != poly.num_vars:
        raise DimensionMismatchError(
            f"batch must have shape (B, {poly.num_vars}), got {Z.shape}"
        )
    if chunk_elements is None:
        chunk_elements = int(config.get_solver_config('brute_force').get('chunk_elements', 1 << 22))
    Z = Z.astype(np.int8, copy=False)
    energies = np.full(Z.shape[0], poly.constant, dtype=np.float64)
    for idx, coefs in poly.term_arrays.values():
        step = max(1, chunk_elements // max(1, Z.shape[0]))
        for start in range(0, idx.shape[0], step):
            block = idx[start:start + step]
            products = np.prod(Z[:, block], axis=2, dtype=np.int8)
            energies += products.astype(np.float64) @ coefs[start:start + step]
    return energies


@dataclass(frozen=True, eq=False)
class BinaryQuadraticForm:
    """
    g(y) = offset + sum_i linear[i] y_i + sum_{i<j} quadratic[(i, j)] y_i y_j, y in {0, 1}

    Args:
        num_vars: Number of binary variables
        offset: Constant term
        linear: Per-variable coefficients (length num_vars)
        quadratic: Map from ordered pairs (i < j) to coefficients
    """

    num_vars: int
    offset: float = 0.0
    linear: np.ndarray = None
    quadratic: Mapping[Tuple[int, int], float] = field(default_factory=dict)

    def __post_init__(self):
        linear = np.zeros(self.num_vars) if self.linear is None else np.array(self.linear, dtype=np.float64)
        if linear.shape != (self.num_vars,):
            raise DimensionMismatchError(
                f"linear must have length {self.num_vars}, got shape {linear.shape}"
            )
        if not np.all(np.isfinite(linear)) or not math.isfinite(self.offset):
            raise DataError("binary form coefficients must be finite")
        clean: Dict[Tuple[int, int], float] = {}
        for (i, j), coef in self.quadratic.items():
            i, j = int(i), int(j)
            if not 0 <= i < j < self.num_vars:
                raise DataError(f"pair ({i}, {j}) is not ordered or out of range")
            coef = float(coef)
            if not math.isfinite(coef):
                raise DataError(f"coefficient of ({i}, {j}) is not finite")
            if coef != 0.0:
                clean[(i, j)] = coef
        linear.setflags(write=False)
        object.__setattr__(self, "offset", float(self.offset))
        object.__setattr__(self, "linear", linear)
        object.__setattr__(self, "quadratic", MappingProxyType(clean))

    def evaluate(self, y) -> float:
        y = np.asarray(y)
        if y.shape != (self.num_vars,):
            raise DimensionMismatchError(
                f"binary assignment has shape {y.shape}, expected ({self.num_vars},)"
            )
        energy = self.offset + float(self.linear @ y)
        for (i, j), coef in self.quadratic.items():
            energy += coef * y[i] * y[j]
        return float(energy)

    def to_spin(self) -> SpinPolynomial:
        return binary_to_spin(self)


def spin_to_binary(poly: SpinPolynomial) -> BinaryQuadraticForm:
    """
    Rewrite a degree <= 2 spin polynomial over y = (1 + z) / 2.

    Substitutes z_i = 2 y_i - 1 term by term.

    Raises:
        DegreeError: if poly.degree() > 2 (quadratize first)
    """
    if poly.degree() > 2:
        raise DegreeError(
            f"spin_to_binary needs degree <= 2, got {poly.degree()}; quadratize first"
        )
    offset = poly.constant
    linear = np.zeros(poly.num_vars, dtype=np.float64)
    quadratic: Dict[Tuple[int, int], float] = defaultdict(float)
    for term, coef in sorted(poly.terms.items()):
        if len(term) == 1:
            (i,) = term
            linear[i] += 2.0 * coef
            offset -= coef
        else:
            i, j = term
            quadratic[(i, j)] += 4.0 * coef
            linear[i] -= 2.0 * coef
            linear[j] -= 2.0 * coef
            offset += coef
    return BinaryQuadraticForm(poly.num_vars, offset, linear, quadratic)


def binary_to_spin(form: BinaryQuadraticForm) -> SpinPolynomial:
    """Rewrite a binary quadratic form over z = 2y - 1"""
    terms = []
    constant = form.offset
    for i, a in enumerate(form.linear):
        if a:
            constant += a / 2.0
            terms.append(((i,), a / 2.0))
    for (i, j), b in sorted(form.quadratic.items()):
        constant += b / 4.0
        terms.append(((i,), b / 4.0))
        terms.append(((j,), b / 4.0))
        terms.append(((i, j), b / 4.0))
    return SpinPolynomial.from_terms(form.num_vars, terms, constant)
