"""Metric geometry of ITC distances.

Equivalence classes of nodes at zero distance, the induced quotient metric,
triangle-inequality audits, Euclidean embeddability through the anchored
Gram matrix, four-point Gromov curvature and inertia (gravity centers).
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import connected_components

from .itc import ITCMatrix


class NonEuclideanError(ValueError):
    """The distance matrix has no Euclidean realisation (Gram matrix not PSD)."""

    def __init__(self, min_eigenvalue: float, max_eigenvalue: float):
        self.min_eigenvalue = min_eigenvalue
        self.max_eigenvalue = max_eigenvalue
        super().__init__(
            f"Gram matrix is not positive semi-definite: most negative eigenvalue "
            f"{min_eigenvalue:.6g} (largest {max_eigenvalue:.6g})"
        )


@dataclass(frozen=True, eq=False)
class QuotientMetric:
    classes: list
    dist: np.ndarray
    spread: np.ndarray
    zero_tol: float

    @property
    def well_defined(self) -> bool:
        return bool(self.spread.max(initial=0.0) <= 10 * self.zero_tol)


@dataclass(frozen=True, eq=False)
class TriangleAudit:
    min_excess: float
    violations: list


@dataclass(frozen=True, eq=False)
class Embedding:
    dim: int
    coordinates: np.ndarray
    eigenvalues: np.ndarray


@dataclass(frozen=True, eq=False)
class GromovReport:
    """Four-point curvature over quadruples.

    ``records`` has one row per quadruple: ``w, x, y, z, L, M, S, delta, scaled``
    with ``delta = (L - M) / 2`` and ``scaled = delta / (L + M + S)``.
    When ``sampled`` is set the maxima are lower bounds.
    """

    delta_max: float
    scaled_delta_max: float
    records: np.ndarray
    quadruple_count: int
    sampled: bool


@dataclass(frozen=True, eq=False)
class InertiaReport:
    alpha: float
    inertia: np.ndarray
    gravity_centers: list
    anti_gravity_centers: list


def _dist(d) -> np.ndarray:
    return np.asarray(d.dist if isinstance(d, ITCMatrix) else d, dtype=float)


def equivalence_classes(dist, zero_tol: float = 1e-6) -> list:
    """Transitive closure of ``d(i, j) <= zero_tol``, as sorted lists ordered by first member."""
    D = _dist(dist)
    _, labels = connected_components(D <= zero_tol, directed=False)
    classes = {}
    for node, lab in enumerate(labels):
        classes.setdefault(lab, []).append(node)
    return sorted(classes.values(), key=lambda c: c[0])


def quotient_metric(dist, classes=None, zero_tol: float = 1e-6) -> QuotientMetric:
    """Class-level distances as block means of node distances.

    ``spread[a, b]`` is the max-min range inside each block. A spread above
    ``10 * zero_tol`` means the quotient is not well defined and triggers a
    warning.
    """
    D = _dist(dist)
    if classes is None:
        classes = equivalence_classes(D, zero_tol)
    m = len(classes)
    Q = np.zeros((m, m))
    spread = np.zeros((m, m))
    for a, b in itertools.combinations(range(m), 2):
        block = D[np.ix_(classes[a], classes[b])]
        Q[a, b] = Q[b, a] = block.mean()
        spread[a, b] = spread[b, a] = block.max() - block.min()
    worst = spread.max(initial=0.0)
    if worst > 10 * zero_tol:
        warnings.warn(f"quotient distance not well defined: block spread {worst:.3g}", RuntimeWarning)
    return QuotientMetric([list(c) for c in classes], Q, spread, zero_tol)


def triangle_audit(dist, tol: float = 1e-9) -> TriangleAudit:
    """Excess ``D_ijk = d(i,k) + d(j,k) - d(i,j)`` over ordered triples of distinct points.

    Violations are triples with ``D_ijk < -tol``.
    """
    D = _dist(dist)
    m = len(D)
    if m < 3:
        return TriangleAudit(math.inf, [])
    E = D[:, None, :] + D[None, :, :] - D[:, :, None]  # E[i, j, k]
    i, j, k = np.indices((m, m, m))
    distinct = (i != j) & (j != k) & (i != k)
    min_excess = float(E[distinct].min())
    bad = np.argwhere(distinct & (E < -tol))
    violations = [(int(a), int(b), int(c), float(E[a, b, c])) for a, b, c in bad]
    return TriangleAudit(min_excess, violations)


def gram_matrix(dist, anchor: int = -1) -> np.ndarray:
    """Anchored Gram matrix ``G_ij = (d_ia^2 + d_ja^2 - d_ij^2) / 2`` over non-anchor points."""
    D = _dist(dist)
    m = len(D)
    a = anchor % m
    keep = np.delete(np.arange(m), a)
    da = D[keep, a]
    D2 = D[np.ix_(keep, keep)] ** 2
    G = 0.5 * (da[:, None] ** 2 + da[None, :] ** 2 - D2)
    return 0.5 * (G + G.T)


def embedding_dimension(gram, rank_tol: float = 1e-8) -> Embedding:
    """Rank of a Gram matrix and the coordinates realising it.

    Eigenvalues above ``rank_tol * lambda_max`` count toward the dimension.
    Coordinates are ``V sqrt(Lambda)`` for those eigenpairs, one row per
    non-anchor point (the anchor sits at the origin). Raises
    :class:`NonEuclideanError` if an eigenvalue is below ``-rank_tol * lambda_max``.
    """
    G = np.asarray(gram, dtype=float)
    w, V = np.linalg.eigh(G)
    top = float(w.max(initial=0.0))
    if top <= 0:
        if len(w) and w.min() < 0:
            raise NonEuclideanError(float(w.min()), top)
        return Embedding(0, np.zeros((len(G), 0)), w)
    if w.min() < -rank_tol * top:
        raise NonEuclideanError(float(w.min()), top)
    keep = np.flatnonzero(w > rank_tol * top)[::-1]
    X = V[:, keep] * np.sqrt(w[keep])
    return Embedding(len(keep), X, w[::-1].copy())


def _quadruple_indices(m, sample_budget, rng):
    total = math.comb(m, 4)
    if total <= sample_budget:
        return np.fromiter(itertools.chain.from_iterable(itertools.combinations(range(m), 4)),
                           dtype=np.int64, count=4 * total).reshape(-1, 4), False
    picks = np.array([np.sort(rng.choice(m, 4, replace=False)) for _ in range(sample_budget)])
    return picks, True


def gromov_delta(dist, sample_budget: int = 2_000_000, seed: int = 0) -> GromovReport:
    """Four-point Gromov delta: exhaustive when ``C(m, 4) <= sample_budget``, else sampled."""
    D = _dist(dist)
    m = len(D)
    if m < 4:
        return GromovReport(0.0, 0.0, np.zeros((0, 9)), 0, False)
    q, sampled = _quadruple_indices(m, sample_budget, np.random.default_rng(seed))
    w, x, y, z = q.T
    sums = np.stack([D[w, x] + D[y, z], D[w, y] + D[x, z], D[w, z] + D[x, y]], axis=1)
    sums.sort(axis=1)
    S, M, L = sums.T
    delta = (L - M) / 2
    G = L + M + S
    with np.errstate(invalid="ignore", divide="ignore"):
        scaled = np.where(G > 0, delta / G, 0.0)
    records = np.column_stack([q, L, M, S, delta, scaled])
    return GromovReport(float(delta.max()), float(scaled.max()), records, len(q), sampled)


def inertia(dist, alpha: float = 2.0, tie_tol: float = 1e-9) -> InertiaReport:
    """``I(i) = sum_j d(i, j)**alpha`` per node; argmin are gravity centers, argmax anti-gravity.

    Infinite distances are left out of the sums (with a warning).
    """
    if alpha < 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    D = _dist(dist).copy()
    inf = ~np.isfinite(D)
    if inf.any():
        warnings.warn(f"{int(inf.sum()) // 2} infinite distances excluded from inertia", RuntimeWarning)
        D[inf] = 0.0
    I = (D ** alpha).sum(axis=1)
    lo = [int(k) for k in np.flatnonzero(I <= I.min() + tie_tol)]
    hi = [int(k) for k in np.flatnonzero(I >= I.max() - tie_tol)]
    return InertiaReport(float(alpha), I, lo, hi)
