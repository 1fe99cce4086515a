"""Eigendecomposition, propagators and time-resolved transfer probabilities."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class NumericalError(ArithmeticError):
    """Raised when a decomposition fails its residual contract."""


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigen-decomposition ``H = sum_k lambda_k v_k v_k^H`` with degenerate groups.

    ``eigenvectors[:, k]`` is the eigenvector for ``eigenvalues[k]``; eigenvalues
    are ascending. ``groups`` partitions the eigen-indices into runs whose
    consecutive gaps are at most ``tol``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    groups: tuple
    tol: float

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    def projectors(self) -> np.ndarray:
        """Stack of group projectors, shape ``(len(groups), n, n)``."""
        V = self.eigenvectors
        return np.stack([V[:, g] @ V[:, g].conj().T for g in self.groups])


def _group(eigenvalues, tol):
    if len(eigenvalues) == 0:
        return ()
    cuts = np.flatnonzero(np.diff(eigenvalues) > tol) + 1
    return tuple(np.split(np.arange(len(eigenvalues)), cuts))


def eigendecompose(h, tol_degenerate: float | None = None) -> Spectrum:
    """Dense Hermitian eigendecomposition of ``h``.

    The default grouping tolerance is ``1e-9 * ||h||_2``. Raises
    :class:`NumericalError` when ``||H v - lambda v|| > 1e-10 ||H||_2``.
    """
    H = np.asarray(h)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {H.shape}")
    if not np.allclose(H, H.conj().T, rtol=0, atol=1e-12 * max(1.0, np.abs(H).max(initial=0))):
        raise ValueError("matrix is not Hermitian")
    try:
        w, V = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver did not converge: {exc}") from exc
    norm = float(np.abs(w).max(initial=0.0))
    resid = float(np.linalg.norm(H @ V - V * w, axis=0).max(initial=0.0))
    if resid > 1e-10 * max(norm, 1e-300) and resid > 1e-14:
        raise NumericalError(f"eigen-residual {resid:.3e} exceeds 1e-10 * ||H||_2 = {1e-10 * norm:.3e}")
    if tol_degenerate is None:
        tol_degenerate = 1e-9 * norm
    w.setflags(write=False)
    V.setflags(write=False)
    return Spectrum(w, V, _group(w, tol_degenerate), float(tol_degenerate))


def propagator(s: Spectrum, t: float) -> np.ndarray:
    """``exp(-i H t)`` assembled from the spectrum."""
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    V = s.eigenvectors
    return (V * np.exp(-1j * s.eigenvalues * t)) @ V.conj().T


def _check_node(s: Spectrum, *nodes):
    for k in nodes:
        if not 0 <= k < s.n:
            raise IndexError(f"node {k} out of range for {s.n} spins")


def transfer_probability(s: Spectrum, i: int, j: int, t):
    """``|<j| exp(-iHt) |i>|**2``; ``t`` may be a scalar or an array of times."""
    _check_node(s, i, j)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("times must be non-negative")
    V = s.eigenvectors
    # for real V this product is commutative, so p(i, j, t) == p(j, i, t) exactly
    c = V[j] * V[i].conj()
    amp = np.exp(-1j * np.multiply.outer(t, s.eigenvalues)) @ c
    p = amp.real ** 2 + amp.imag ** 2
    # U(0) = I exactly; the eigenbasis sum only reproduces it to rounding
    p = np.where(t == 0, float(i == j), p)
    return float(p) if p.ndim == 0 else p


def time_grid(t_max: float, dt: float) -> np.ndarray:
    """Uniform grid ``0, dt, 2 dt, ...`` up to and including ``t_max`` (within rounding)."""
    if not dt > 0:
        raise ValueError(f"time step must be positive, got {dt}")
    if not t_max > 0:
        raise ValueError(f"t_max must be positive, got {t_max}")
    if dt > t_max:
        raise ValueError("time step exceeds t_max")
    steps = int(np.floor(t_max / dt * (1 + 1e-12)))
    return np.arange(steps + 1) * dt


def probability_time_series(s: Spectrum, i: int, j: int, t_max: float, dt: float,
                            chunk: int = 200_000):
    """Sample ``transfer_probability`` on :func:`time_grid`; returns ``(t, p)`` arrays."""
    t = time_grid(t_max, dt)
    p = np.empty_like(t)
    for a in range(0, len(t), chunk):
        p[a:a + chunk] = transfer_probability(s, i, j, t[a:a + chunk])
    return t, p
