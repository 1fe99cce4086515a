"""Maximum information transfer capacity (ITC) and its attainability."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .model import SpinNetwork, single_excitation_hamiltonian
from .spectral import Spectrum, _check_node, eigendecompose, transfer_probability, time_grid


class BudgetExceededError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class ITCMatrix:
    """Pairwise transfer maxima ``p_max`` and distances ``dist = -ln p_max``."""

    p_max: np.ndarray
    dist: np.ndarray

    @property
    def n(self) -> int:
        return self.p_max.shape[0]


@dataclass(frozen=True)
class RationalRelation:
    coefficients: tuple
    residual: float


@dataclass(frozen=True)
class Attainment:
    t: float
    p: float
    phase_residuals: np.ndarray
    aligned_residuals: np.ndarray


def _pair_amplitude_bound(s: Spectrum) -> np.ndarray:
    """``A[i, j] = sum_g |<i|P_g|j>|`` over all degenerate groups ``g``."""
    V = s.eigenvectors
    A = np.zeros((s.n, s.n))
    for g in s.groups:
        Vg = V[:, g]
        A += np.abs(Vg @ Vg.conj().T)
    return A


def max_transfer_probability(s: Spectrum, i: int, j: int) -> float:
    """Least upper bound of ``p(i, j, t)`` over ``t >= 0``.

    Each group of (numerically) degenerate eigenvalues contributes the
    modulus of its projector element, so the result does not depend on how
    the eigensolver picked a basis inside a degenerate eigenspace.
    """
    _check_node(s, i, j)
    V = s.eigenvectors
    amp = sum(abs(V[i, g] @ V[j, g].conj()) for g in s.groups)
    return float(min(amp * amp, 1.0))


def itc_distance(p):
    """``-ln p``, with ``+inf`` for ``p == 0``. Works elementwise on arrays."""
    p = np.asarray(p, dtype=float)
    if np.any(~((p >= 0) & (p <= 1))):
        raise ValueError("probability outside [0, 1]")
    with np.errstate(divide="ignore"):
        d = -np.log(p)
    d = d + 0.0  # -0.0 -> 0.0
    return float(d) if d.ndim == 0 else d


def itc_from_spectrum(s: Spectrum) -> ITCMatrix:
    A = _pair_amplitude_bound(s)
    A = 0.5 * (A + A.T)
    P = np.minimum(A * A, 1.0)
    P[np.diag_indices_from(P)] = 1.0
    D = itc_distance(P)
    return ITCMatrix(P, D)


def itc_matrix(net: SpinNetwork) -> ITCMatrix:
    return itc_from_spectrum(eigendecompose(single_excitation_hamiltonian(net)))


def default_dt(s: Spectrum) -> float:
    """Time step resolving the fastest phase: ``0.01 / ||H||_2``."""
    norm = float(np.abs(s.eigenvalues).max(initial=0.0))
    return 0.01 / norm if norm > 0 else 0.01


def _scan(s, i, j, t_max, dt, chunk=200_000):
    t = time_grid(t_max, dt)
    for a in range(0, len(t), chunk):
        tc = t[a:a + chunk]
        yield tc, np.atleast_1d(transfer_probability(s, i, j, tc))


def verify_bound_by_scan(s: Spectrum, i: int, j: int, t_max: float, dt: float | None = None) -> float:
    """``p_max - max_t p(i, j, t)`` over a uniform grid. Never below ``-1e-9``."""
    pm = max_transfer_probability(s, i, j)
    best = max(float(p.max()) for _, p in _scan(s, i, j, t_max, dt or default_dt(s)))
    return pm - best


def rational_independence_check(eigenvalues, include_unit: bool = False, max_coeff: int = 5,
                                tol_relation: float = 1e-9, budget: int = 10_000_000):
    """Integer relations ``sum_k m_k lambda_k / pi (+ m_0) ~ 0`` with ``|m_k| <= max_coeff``.

    Exhaustive search. Only primitive vectors (gcd 1) whose first non-zero
    entry is positive are returned, lowest height (L1 norm) first. An empty result means
    no relation of bounded height exists; it does not prove independence.
    """
    if max_coeff < 1:
        raise ValueError("max_coeff must be >= 1")
    x = np.asarray(eigenvalues, dtype=float) / np.pi
    if include_unit:
        x = np.append(x, 1.0)
    m = len(x)
    size = (2 * max_coeff + 1) ** m
    if size > budget:
        raise BudgetExceededError(
            f"search space {(2 * max_coeff + 1)}^{m} = {size} exceeds budget {budget}; "
            "use a smaller max_coeff"
        )
    coeffs = np.arange(-max_coeff, max_coeff + 1)
    sums = np.zeros(1)
    for xk in x:
        sums = (sums[:, None] + coeffs[None, :] * xk).ravel()
    hits = np.flatnonzero(np.abs(sums) < tol_relation)
    relations = []
    for flat in hits:
        vec = np.array(np.unravel_index(flat, (len(coeffs),) * m)) - max_coeff
        nz = vec[vec != 0]
        if len(nz) == 0 or nz[0] < 0 or math.gcd(*map(int, nz)) != 1:
            continue
        relations.append(RationalRelation(tuple(int(v) for v in vec), float(abs(vec @ x))))
    relations.sort(key=lambda r: (sum(map(abs, r.coefficients)), r.residual))
    return relations


def phase_tolerance(epsilon: float, n: int) -> float:
    """Per-coordinate phase accuracy ``arcsin(eps / 2n)`` that secures ``p_max - p <= eps``."""
    if not epsilon > 0 or n < 1:
        raise ValueError("need epsilon > 0 and n >= 1")
    r = epsilon / (2 * n)
    if r > 1:
        raise ValueError(f"epsilon / 2n = {r} exceeds 1")
    return math.asin(r)


def _wrap(a):
    """Map angles to ``(-pi, pi]``."""
    return np.pi - np.mod(np.pi - a, 2 * np.pi)


def find_attainment_time(s: Spectrum, i: int, j: int, epsilon: float,
                         t_max: float, dt: float | None = None):
    """First grid time with ``p_max - p(i, j, t) < epsilon``, or ``None``.

    The returned :class:`Attainment` also carries, per degenerate group, the
    circular distance between the accumulated phase ``-lambda t`` and the
    parity target (``pi`` where the projector element is negative, else 0).
    Those targets fix the global phase of the amplitude to zero; the
    ``aligned_residuals`` measure the same distances after removing the
    best common phase, which is what actually controls ``p``. Groups that
    do not couple ``i`` and ``j`` report ``nan``.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    pm = max_transfer_probability(s, i, j)
    V = s.eigenvectors
    for t, p in _scan(s, i, j, t_max, dt or default_dt(s)):
        k = np.flatnonzero(pm - p < epsilon)
        if not len(k):
            continue
        tk = float(t[k[0]])
        c = np.array([(V[i, g] @ V[j, g].conj()).real for g in s.groups])
        lam = np.array([s.eigenvalues[g].mean() for g in s.groups])
        live = np.abs(c) >= 1e-12
        x = -lam * tk
        target = np.where(c < 0, np.pi, 0.0)
        common = np.angle(np.sum(np.abs(c[live]) * np.exp(1j * (x - target)[live])))
        res = np.where(live, np.abs(_wrap(x - target)), np.nan)
        aligned = np.where(live, np.abs(_wrap(x - target - common)), np.nan)
        return Attainment(tk, float(p[k[0]]), res, aligned)
    return None


_NOWAK_LOW = {1: math.sqrt(5.0), 2: math.sqrt(23.0) / 2, 3: 1.7739}


def _log_nowak(n: int) -> float:
    if n in _NOWAK_LOW:
        return math.log(_NOWAK_LOW[n])
    return ((n + 1) / 2 * math.log(n + 1) - n / 2 * math.log(n)
            + (n + 1) / 2 * math.log(math.pi / 2) - gammaln((n + 5) / 2))


def nowak_constant(n: int) -> float:
    """Best-known constant for simultaneous Diophantine approximation in ``n`` dimensions.

    Exact for ``n = 1, 2``; lower bounds for ``n >= 3``.
    """
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    return math.exp(_log_nowak(int(n)))


def attainment_time_estimate(epsilon: float, n: int) -> float:
    """Discrete-step estimate ``pi**n / (c_n * epsilon**n)`` of the time to come ``epsilon``-close.

    The result counts translation steps on the torus, not physical time.
    Returns ``inf`` with a :class:`RuntimeWarning` when it overflows a float.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    log_t = n * math.log(math.pi) - _log_nowak(n) - n * math.log(epsilon)
    if log_t > math.log(np.finfo(float).max):
        warnings.warn(f"attainment estimate overflows (log value {log_t:.1f})", RuntimeWarning)
        return math.inf
    if n in (1, 2):
        # direct form keeps the closed-form constants exact
        return math.pi ** n / (nowak_constant(n) * epsilon ** n)
    return math.exp(log_t)
