"""
Closed-form spin polynomials for the clustering objectives.

Every builder returns a polynomial whose energy differs from
raw_objective(kind, data, z) by at most a z-independent constant; the
Intra, IntraStar, Combined and Inter builders carry the constant too, so
energies equal the raw values. All outputs contain only even-length tuples.

Notation: q_i = ||x_i||^2, Q = sum_i q_i, S = sum_i x_i, W = ||S||^2,
w_i = S . x_i, g_ij = x_i . x_j.
"""

import logging
from functools import lru_cache
from itertools import combinations
from typing import Optional, Tuple

import numpy as np

from config import config
from core.dataset import Dataset
from core.polynomial import SpinPolynomial
from objectives.centroids import ObjectiveKind

logger = logging.getLogger(__name__)


def _pair_polynomial(num_vars: int, coefficients: np.ndarray, constant: float = 0.0) -> SpinPolynomial:
    """Polynomial sum_{i<j} coefficients[k] z_i z_j over np.triu_indices order"""
    rows, cols = np.triu_indices(num_vars, k=1)
    terms = {(int(i), int(j)): float(c) for i, j, c in zip(rows, cols, coefficients)}
    return SpinPolynomial(num_vars=num_vars, constant=constant, terms=terms)


def _moments(data: Dataset):
    X = data.points
    q = np.sum(X ** 2, axis=1)
    S = X.sum(axis=0)
    return X, q, float(q.sum()), S, float(S @ S)


def build_weighted_maxcut(data: Dataset) -> SpinPolynomial:
    """a_ij = ||x_i - x_j||_2, no linear or constant part"""
    X = data.points
    rows, cols = np.triu_indices(data.num_points, k=1)
    diff = X[rows] - X[cols]
    return _pair_polynomial(data.num_points, np.sqrt(np.sum(diff ** 2, axis=1)))


def build_intra_star(data: Dataset) -> SpinPolynomial:
    """
    Intracluster objective scaled by N_+-.

    N_+ l(mu_+, z, +1) is the sum of squared distances over same-cluster
    pairs, so a_ij = 1/2 ||x_i - x_j||^2 and a_0 = sum_{i<j} a_ij.
    """
    X = data.points
    rows, cols = np.triu_indices(data.num_points, k=1)
    diff = X[rows] - X[cols]
    coefficients = 0.5 * np.sum(diff ** 2, axis=1)
    return _pair_polynomial(data.num_points, coefficients, float(coefficients.sum()))


def build_intra(data: Dataset) -> SpinPolynomial:
    """
    Intracluster objective scaled by N_+-^2.

    a_ij = 1/2 [Q + N (q_i + q_j) - N g_ij - S . (x_i + x_j)]
    a_0  = (N + 2) / 4 (N Q - W)
    """
    N = data.num_points
    X, q, Q, S, W = _moments(data)
    rows, cols = np.triu_indices(N, k=1)
    g = np.sum(X[rows] * X[cols], axis=1)
    w = X @ S
    coefficients = 0.5 * (Q + N * (q[rows] + q[cols]) - N * g - (w[rows] + w[cols]))
    constant = (N + 2) / 4.0 * (N * Q - W)
    return _pair_polynomial(N, coefficients, constant)


def build_combined(data: Dataset) -> SpinPolynomial:
    """
    Intra minus inter distances scaled by N_+^2 N_-^2.

    Equals -N N_+^2 N_-^2 ||mu_+ - mu_-||^2 = -(N/4) ||N T - sigma S||^2 with
    T = sum_i x_i z_i and sigma = sum_i z_i, giving

    a_ij = -(N/2) [N^2 g_ij - N S . (x_i + x_j) + W]
    a_0  = -(N^2/4) (N Q - W)
    """
    N = data.num_points
    X, q, Q, S, W = _moments(data)
    rows, cols = np.triu_indices(N, k=1)
    g = np.sum(X[rows] * X[cols], axis=1)
    w = X @ S
    coefficients = -0.5 * N * (N ** 2 * g - N * (w[rows] + w[cols]) + W)
    constant = -(N ** 2) / 4.0 * (N * Q - W)
    return _pair_polynomial(N, coefficients, constant)


def _pairs_times_e2(p: np.ndarray, with_quartic: bool = True) -> Tuple[float, np.ndarray, np.ndarray]:
    """
    Multilinear expansion of (sum_{i<j} p_ij z_i z_j)(sum_{k<l} z_k z_l).

    Args:
        p: Symmetric N x N matrix (diagonal ignored)
        with_quartic: Skip the C(N, 4) quartic coefficients when False

    Returns:
        (constant, pair coefficients in triu order, quartic coefficients in
        combinations(range(N), 4) order)
    """
    N = p.shape[0]
    off = p - np.diag(np.diag(p))
    rows, cols = np.triu_indices(N, k=1)
    constant = float(off[rows, cols].sum())
    r = off.sum(axis=1)
    pair = r[rows] + r[cols] - 2.0 * off[rows, cols]
    if with_quartic and N >= 4:
        a, b, c, d = _quad_index(N).T
        quartic = off[a, b] + off[a, c] + off[a, d] + off[b, c] + off[b, d] + off[c, d]
    else:
        quartic = np.zeros(0)
    return constant, pair, quartic


@lru_cache(maxsize=8)
def _quad_index(n: int) -> np.ndarray:
    """combinations(range(n), 4) as a read-only (C(n, 4), 4) array"""
    index = np.array(list(combinations(range(n), 4)), dtype=np.int64).reshape(-1, 4)
    index.setflags(write=False)
    return index


def _inter_coefficients(data: Dataset, with_quartic: bool = True) -> Tuple[np.ndarray, np.ndarray]:
    N = data.num_points
    X, q, Q, S, W = _moments(data)
    rows, cols = np.triu_indices(N, k=1)
    gram = X @ X.T
    w = X @ S
    h = w[:, None] + w[None, :]

    _, e2_sq_pair, e2_sq_quad = _pairs_times_e2(np.ones((N, N)), with_quartic)
    _, e2g_pair, e2g_quad = _pairs_times_e2(gram, with_quartic)
    _, e2h_pair, e2h_quad = _pairs_times_e2(h, with_quartic)

    # e2 V = W e2 + e2 H, with H = sum_{i<j} h_ij z_i z_j
    e2v_pair = W + e2h_pair

    c_e2 = (N ** 2 / 4.0 - 3.0 * N / 8.0) * Q - (5.0 * N / 8.0) * W
    c_e2sq = -0.25 * Q
    c_g = -(3.0 * N ** 3 / 8.0 + N ** 2 / 8.0)
    c_e2g = -N / 4.0
    c_v = 3.0 * N ** 2 / 8.0 + N / 8.0
    c_e2v = 0.25

    pair = (
        c_e2
        + c_e2sq * e2_sq_pair
        + c_g * gram[rows, cols]
        + c_e2g * e2g_pair
        + c_v * h[rows, cols]
        + c_e2v * e2v_pair
    )
    quartic = c_e2sq * e2_sq_quad + c_e2g * e2g_quad + c_e2v * e2h_quad
    return pair, quartic


def build_inter(data: Dataset) -> SpinPolynomial:
    """
    Intercluster objective scaled by N_+^2 N_-^2, a degree-4 polynomial.

    With e2 = sum_{i<j} z_i z_j, G = sum_{i<j} g_ij z_i z_j and
    V = sigma (S . T) = W + sum_{i<j} (w_i + w_j) z_i z_j:

        f = (N^2/4 - 3N/8) Q e2 - (5N/8) W e2 - (1/4) Q e2^2
            - (3N^3/8 + N^2/8) G - (N/4) e2 G
            + (3N^2/8 + N/8) V + (1/4) e2 V + const

    Products of pair sums are expanded with z_i^2 = 1. The constant is
    fixed so the single-cluster assignment (all +1) evaluates to 0.
    """
    N = data.num_points
    pair, quartic = _inter_coefficients(data)
    rows, cols = np.triu_indices(N, k=1)
    terms = {(int(i), int(j)): float(c) for i, j, c in zip(rows, cols, pair)}
    if N >= 4:
        for key, c in zip(_quad_index(N), quartic):
            terms[tuple(int(k) for k in key)] = float(c)
    constant = -(float(pair.sum()) + float(np.sum(quartic)))
    logger.debug("inter polynomial: %d pairs, %d quartic terms", len(pair), len(quartic))
    return SpinPolynomial(num_vars=N, constant=constant, terms=terms)


_BUILDERS = {
    ObjectiveKind.WEIGHTED_MAXCUT: build_weighted_maxcut,
    ObjectiveKind.INTRA: build_intra,
    ObjectiveKind.INTRA_STAR: build_intra_star,
    ObjectiveKind.INTER: build_inter,
    ObjectiveKind.COMBINED: build_combined,
}


def build_objective(kind, data: Dataset) -> SpinPolynomial:
    """Closed-form polynomial for any ObjectiveKind (or its name)"""
    return _BUILDERS[ObjectiveKind.parse(kind)](data)


def normalize(poly: SpinPolynomial) -> Tuple[SpinPolynomial, float]:
    """
    Divide by the max-abs coefficient.

    Returns:
        (poly / sigma, sigma); sigma is 1.0 for a constant-only polynomial
    """
    sigma = poly.max_abs_coefficient()
    if sigma == 0.0:
        return poly, 1.0
    return poly.scaled(1.0 / sigma), sigma


def objective_scale(kind, data: Dataset, max_quartic_vars: Optional[int] = None) -> float:
    """
    Max-abs coefficient of build_objective(kind, data) without materializing a large Inter.

    Beyond max_quartic_vars the Inter scale is taken over its pairwise
    coefficients only; the quartic ones are smaller by a factor of order N.
    """
    kind = ObjectiveKind.parse(kind)
    if max_quartic_vars is None:
        max_quartic_vars = int(config.get_solver_config('polynomial').get('max_quartic_vars', 24))
    if kind is ObjectiveKind.INTER and data.num_points > max_quartic_vars:
        pair, _ = _inter_coefficients(data, with_quartic=False)
        scale = float(np.max(np.abs(pair))) if pair.size else 0.0
    else:
        scale = build_objective(kind, data).max_abs_coefficient()
    return scale or 1.0
