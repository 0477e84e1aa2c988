"""
Penalty terms for labeling, cardinality and Must-Link / Cannot-Link constraints.

Every function returns a new polynomial; the input is never modified.
"""

import logging
from itertools import combinations
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from config import config
from core.dataset import as_spins
from core.errors import ConstraintError
from core.polynomial import SpinPolynomial

logger = logging.getLogger(__name__)


class Link(BaseModel):
    """Pairwise constraint: q = +1 Must-Link, q = -1 Cannot-Link"""

    model_config = ConfigDict(frozen=True)

    i: int = Field(ge=0)
    j: int = Field(ge=0)
    q: int

    @field_validator('q')
    @classmethod
    def _check_q(cls, v: int) -> int:
        if v not in (1, -1):
            raise ValueError(f"q must be +1 (must-link) or -1 (cannot-link), got {v}")
        return v

    @model_validator(mode='after')
    def _check_order(self) -> 'Link':
        if self.i >= self.j:
            raise ValueError(f"link pair must satisfy i < j, got ({self.i}, {self.j})")
        return self


class Cardinality(BaseModel):
    """Target C for sum_i z_i with penalty weight lambda"""

    model_config = ConfigDict(populate_by_name=True)

    target: int = Field(alias='C')
    weight: Optional[float] = Field(default=None, alias='lambda', gt=0)


class ConstraintSet(BaseModel):
    """
    Constraints attached to one clustering problem.

    A missing lambda means "use default_penalty" when the set is applied.
    """

    model_config = ConfigDict(populate_by_name=True)

    num_points: int = Field(ge=2)
    labels: List[Tuple[int, int]] = Field(default_factory=list)
    label_lambda: Optional[float] = Field(default=None, gt=0)
    cardinality: Optional[Cardinality] = None
    links: List[Link] = Field(default_factory=list)
    link_lambda: Optional[float] = Field(default=None, gt=0)

    @model_validator(mode='after')
    def _check_ranges(self) -> 'ConstraintSet':
        n = self.num_points
        for index, sign in self.labels:
            if not 0 <= index < n:
                raise ValueError(f"label index {index} out of range for {n} points")
            if sign not in (1, -1):
                raise ValueError(f"label for point {index} must be +1 or -1, got {sign}")
        seen = set()
        for link in self.links:
            if link.j >= n:
                raise ValueError(f"link ({link.i}, {link.j}) out of range for {n} points")
            if (link.i, link.j) in seen:
                raise ValueError(f"duplicate link pair ({link.i}, {link.j})")
            seen.add((link.i, link.j))
        if self.cardinality is not None:
            c = self.cardinality.target
            if abs(c) > n or (c - n) % 2:
                raise ValueError(
                    f"cardinality target C={c} is unattainable for N={n} "
                    "(sum of N spins has the parity of N and |C| <= N)"
                )
        return self

    @property
    def is_empty(self) -> bool:
        return not self.labels and self.cardinality is None and not self.links


LinkLike = Union[Link, Tuple[int, int, int]]


def _as_link(link: LinkLike) -> Link:
    if isinstance(link, Link):
        return link
    try:
        i, j, q = link
        return Link(i=int(i), j=int(j), q=int(q))
    except (TypeError, ValueError) as e:
        raise ConstraintError(f"malformed link {link!r}: {e}") from None


def _check_lambda(lam: float, what: str) -> float:
    if lam is None or not lam > 0:
        raise ConstraintError(f"{what} penalty weight must be > 0, got {lam}")
    return float(lam)


def default_penalty(poly: SpinPolynomial, num_points: Optional[int] = None) -> float:
    """
    lambda = factor x max-abs coefficient x N (factor 2 by default).

    A polynomial without terms uses a coefficient scale of 1.
    """
    factor = float(config.get_solver_config('penalties').get('lambda_factor', 2.0))
    n = poly.num_vars if num_points is None else num_points
    scale = poly.max_abs_coefficient() or 1.0
    return factor * scale * n


def apply_labeling(poly: SpinPolynomial, labels: Iterable[Tuple[int, int]], lam: float) -> SpinPolynomial:
    """Add -lambda * s_i * z_i for every labeled point (i, s_i)"""
    lam = _check_lambda(lam, "labeling")
    terms = []
    for index, sign in labels:
        if not 0 <= index < poly.num_vars:
            raise ConstraintError(f"label index {index} out of range for {poly.num_vars} variables")
        if sign not in (1, -1):
            raise ConstraintError(f"label for point {index} must be +1 or -1, got {sign}")
        terms.append(((index,), -lam * sign))
    return poly + SpinPolynomial.from_terms(poly.num_vars, terms)


def apply_cardinality(
    poly: SpinPolynomial, target: int, lam: float, num_points: Optional[int] = None
) -> SpinPolynomial:
    """
    Add lambda (C - sum_i z_i)^2 over the first num_points variables.

    Expanded as lambda (C^2 + N) - 2 lambda C sum_i z_i + 2 lambda sum_{i<j} z_i z_j.

    Raises:
        ConstraintError: if C and N differ in parity or |C| > N
    """
    lam = _check_lambda(lam, "cardinality")
    n = poly.num_vars if num_points is None else num_points
    if abs(target) > n or (target - n) % 2:
        raise ConstraintError(
            f"cardinality target C={target} is unattainable for N={n} points"
        )
    terms = [((i,), -2.0 * lam * target) for i in range(n)]
    terms.extend(((i, j), 2.0 * lam) for i, j in combinations(range(n), 2))
    penalty = SpinPolynomial.from_terms(poly.num_vars, terms, lam * (target ** 2 + n))
    return poly + penalty


def apply_links(poly: SpinPolynomial, links: Iterable[LinkLike], lam: float) -> SpinPolynomial:
    """Add -lambda * sum Q_ij z_i z_j over Must-Link (+1) and Cannot-Link (-1) pairs"""
    lam = _check_lambda(lam, "link")
    terms = []
    for raw in links:
        link = _as_link(raw)
        if link.j >= poly.num_vars:
            raise ConstraintError(
                f"link ({link.i}, {link.j}) out of range for {poly.num_vars} variables"
            )
        terms.append(((link.i, link.j), -lam * link.q))
    return poly + SpinPolynomial.from_terms(poly.num_vars, terms)


def derive_links_from_labels(
    indices: Sequence[int],
    classes: Sequence,
    max_links: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
) -> List[Link]:
    """
    Must-Link for every revealed same-class pair, Cannot-Link otherwise.

    Args:
        indices: Revealed point indices
        classes: Ground-truth class of each revealed point
        max_links: Keep a uniform sample of this many pairs when exceeded
        rng: Generator used for that sample

    Returns:
        Links sorted by (i, j)
    """
    if len(indices) != len(classes):
        raise ConstraintError("indices and classes must have the same length")
    revealed = sorted(zip((int(i) for i in indices), classes), key=lambda item: item[0])
    links = [
        Link(i=a, j=b, q=1 if ca == cb else -1)
        for (a, ca), (b, cb) in combinations(revealed, 2)
        if a != b
    ]
    if max_links is not None and len(links) > max_links:
        rng = rng if rng is not None else np.random.default_rng(0)
        keep = np.sort(rng.choice(len(links), size=max_links, replace=False))
        logger.debug("sampled %d of %d links", max_links, len(links))
        links = [links[k] for k in keep]
    return links


def apply_constraints(poly: SpinPolynomial, constraint_set: ConstraintSet) -> SpinPolynomial:
    """Apply every constraint in the set, filling missing lambdas with default_penalty"""
    n = constraint_set.num_points
    default = default_penalty(poly, n)
    result = poly
    if constraint_set.labels:
        result = apply_labeling(result, constraint_set.labels, constraint_set.label_lambda or default)
    if constraint_set.cardinality is not None:
        card = constraint_set.cardinality
        result = apply_cardinality(result, card.target, card.weight or default, num_points=n)
    if constraint_set.links:
        result = apply_links(result, constraint_set.links, constraint_set.link_lambda or default)
    return result


def satisfies(constraint_set: ConstraintSet, z) -> bool:
    """True when z meets every label, the cardinality target and every link"""
    spins = as_spins(z)[:constraint_set.num_points]
    if any(spins[i] != s for i, s in constraint_set.labels):
        return False
    if constraint_set.cardinality is not None and int(spins.sum()) != constraint_set.cardinality.target:
        return False
    return all(spins[link.i] * spins[link.j] == link.q for link in constraint_set.links)
