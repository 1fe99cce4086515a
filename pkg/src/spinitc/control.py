"""Bang-bang control of excitation transfer and effective Hamiltonians."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.linalg import expm, schur
from scipy.optimize import minimize

from .itc import ITCMatrix, itc_from_spectrum
from .spectral import Spectrum, eigendecompose, time_grid, transfer_probability


@dataclass(frozen=True)
class ControlSequence:
    """Alternating free/controlled evolution on ``[0, final_time]``.

    ``switch_times`` are the interior switching instants. The first segment
    ``[0, t_1]`` is free (``H0``), the next runs under ``H0 + H1``, and so on;
    the last segment ends at ``final_time``.
    """

    site: int | None
    strength: float
    switch_times: tuple
    final_time: float
    achieved_p: float = float("nan")
    seed: int | None = None

    def __post_init__(self):
        times = tuple(float(t) for t in self.switch_times)
        object.__setattr__(self, "switch_times", times)
        object.__setattr__(self, "final_time", float(self.final_time))
        if self.final_time < 0:
            raise ValueError(f"final_time must be non-negative, got {self.final_time}")
        edges = (0.0,) + times + (self.final_time,)
        if times and any(b <= a for a, b in zip(edges[:-1], edges[1:])):
            raise ValueError(f"switch times must be strictly increasing in (0, final_time): {edges}")

    @property
    def durations(self) -> np.ndarray:
        return np.diff((0.0,) + self.switch_times + (self.final_time,))

    @classmethod
    def from_durations(cls, durations, site, strength, **kw):
        d = np.asarray(durations, dtype=float)
        ends = np.cumsum(d)
        return cls(site, strength, tuple(ends[:-1]), float(ends[-1]) if len(d) else 0.0, **kw)

    def to_dict(self) -> dict:
        return {
            "site": self.site,
            "strength": self.strength,
            "switch_times": list(self.switch_times),
            "final_time": self.final_time,
            "achieved_p": self.achieved_p,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ControlSequence":
        site = d.get("site")
        return cls(None if site is None else int(site), float(d["strength"]), tuple(d["switch_times"]),
                   float(d["final_time"]), float(d.get("achieved_p", float("nan"))), d.get("seed"))


@dataclass(frozen=True, eq=False)
class EffectiveHamiltonian:
    matrix: np.ndarray
    horizon: float
    near_branch_cut: bool = False


@dataclass
class OptimizerConfig:
    restarts: int = 20
    seed: int = 0
    maxfev: int = 20_000
    xtol: float = 1e-8
    ftol: float = 1e-13


def control_hamiltonian(n: int, site: int, strength: float = 2.0) -> np.ndarray:
    """Local field on ``site``: ``strength * |site><site|``.

    A Pauli-z field on one spin acts in the one-excitation subspace as
    ``2 |c><c| - I``; the identity part is a global phase and is dropped.
    """
    if not 0 <= site < n:
        raise IndexError(f"site {site} out of range for {n} spins")
    H1 = np.zeros((n, n))
    H1[site, site] = strength
    return H1


class _Segments:
    """Pre-diagonalised free and controlled generators."""

    def __init__(self, h0, h1):
        self.spectra = (eigendecompose(np.asarray(h0)), eigendecompose(np.asarray(h0) + np.asarray(h1)))

    def unitary(self, durations):
        n = self.spectra[0].n
        U = np.eye(n, dtype=complex)
        for k, d in enumerate(durations):
            s = self.spectra[k % 2]
            V = s.eigenvectors
            U = (V * np.exp(-1j * s.eigenvalues * d)) @ (V.conj().T @ U)
        return U

    def amplitude(self, durations, i, j):
        psi = np.zeros(self.spectra[0].n, dtype=complex)
        psi[i] = 1.0
        for k, d in enumerate(durations):
            s = self.spectra[k % 2]
            V = s.eigenvectors
            psi = V @ (np.exp(-1j * s.eigenvalues * d) * (V.conj().T @ psi))
        return psi[j]


def _single_site(h1):
    """``(site, strength)`` when ``h1`` is a one-site field, else ``(None, nan)``."""
    nz = np.argwhere(h1 != 0)
    if len(nz) == 1 and nz[0, 0] == nz[0, 1]:
        k = int(nz[0, 0])
        return k, float(h1[k, k])
    return None, float("nan")


def piecewise_evolution(h0, h1, seq: ControlSequence) -> np.ndarray:
    """Time-ordered product of segment propagators, free segment first."""
    return _Segments(h0, h1).unitary(seq.durations)


def controlled_transfer_probability(h0, h1, seq: ControlSequence, i: int, j: int) -> float:
    U = piecewise_evolution(h0, h1, seq)
    n = U.shape[0]
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"nodes ({i}, {j}) out of range for {n} spins")
    return float(abs(U[j, i]) ** 2)


def optimize_switching(h0, h1, i: int, j: int, segments: int = 8, horizon: float = 30.0,
                       cfg: OptimizerConfig | None = None, site: int | None = None,
                       strength: float | None = None) -> ControlSequence:
    """Maximise the controlled ``i -> j`` transfer probability over switching times.

    Segment durations are ``horizon * softmax(x)[:segments]`` with one slack
    component, so they stay positive and sum to at most ``horizon``. Each
    restart runs Powell's method from a random ``x``; the best result is
    re-evaluated by direct evolution before being returned, and replaced by
    the best free-evolution time on a grid over ``[0, horizon]`` if that is
    better. ``segments = 0`` returns that free-evolution candidate directly.
    """
    cfg = cfg or OptimizerConfig()
    h0 = np.asarray(h0, dtype=float)
    h1 = np.asarray(h1, dtype=float)
    if site is None:
        site, strength = _single_site(h1)
    elif strength is None:
        strength = float(h1[site, site])
    segs = _Segments(h0, h1)
    if segments < 0:
        raise ValueError("segments must be >= 0")

    # free evolution on a grid is always a candidate, so control never does worse
    s0 = segs.spectra[0]
    t = time_grid(horizon, 0.01 / max(np.abs(s0.eigenvalues).max(), 1.0))
    p = transfer_probability(s0, i, j, t)
    free = ControlSequence(site, strength, (), float(t[int(np.argmax(p))]), seed=cfg.seed)
    free = replace(free, achieved_p=controlled_transfer_probability(h0, h1, free, i, j))
    if segments == 0:
        return free

    def durations(x):
        e = np.exp(x - x.max())
        return horizon * e[:segments] / e.sum()

    def loss(x):
        a = segs.amplitude(durations(x), i, j)
        return -(a.real ** 2 + a.imag ** 2)

    rng = np.random.default_rng(cfg.seed)
    best_x, best_f = None, np.inf
    for _ in range(cfg.restarts):
        x0 = rng.normal(scale=0.5, size=segments + 1)
        res = minimize(loss, x0, method="Powell",
                       options=dict(maxfev=cfg.maxfev, xtol=cfg.xtol, ftol=cfg.ftol))
        if res.fun < best_f:
            best_x, best_f = res.x, res.fun
    if best_x is None:
        return free
    d = _compact(durations(best_x), 1e-9 * horizon)
    seq = ControlSequence.from_durations(d, site, strength, seed=cfg.seed)
    seq = replace(seq, achieved_p=controlled_transfer_probability(h0, h1, seq, i, j))
    return seq if seq.achieved_p >= free.achieved_p else free


def _compact(durations, tol):
    """Drop interior segments shorter than ``tol`` by merging their neighbours."""
    d = list(durations)
    k = 1
    while k < len(d) - 1:
        if d[k] < tol:
            d[k - 1] += d[k + 1]
            del d[k:k + 2]
        else:
            k += 1
    if len(d) > 1 and d[-1] < tol:
        d.pop()
    return d


def _check_unitary(u, tol=1e-9):
    err = np.abs(u.conj().T @ u - np.eye(len(u))).max()
    if err > tol:
        raise ValueError(f"matrix is not unitary: max |U^H U - I| = {err:.3e}")


def effective_hamiltonian(u, horizon: float, branch_tol: float = 1e-6) -> EffectiveHamiltonian:
    """Hermitian ``H_eff`` with ``exp(-i H_eff horizon) = u`` on the principal branch.

    Eigenphases are taken in ``(-pi, pi]``. ``near_branch_cut`` is set when a
    phase lies within ``branch_tol`` of ``-pi``/``pi``, where the generator is
    not unique.
    """
    u = np.asarray(u, dtype=complex)
    if not horizon > 0:
        raise ValueError("horizon must be positive")
    _check_unitary(u)
    # Schur form of a normal matrix is diagonal with a unitary basis, also for repeated phases
    T, Z = schur(u, output="complex")
    theta = np.angle(np.diag(T))
    theta[theta <= -np.pi] = np.pi
    near = bool(np.any(np.pi - np.abs(theta) < branch_tol))
    H = -(Z * theta) @ Z.conj().T / horizon
    H = 0.5 * (H + H.conj().T)
    return EffectiveHamiltonian(H, float(horizon), near)


def effective_itc(h_eff: EffectiveHamiltonian | np.ndarray) -> ITCMatrix:
    """Transfer maxima of the effective generator (group-projector bound)."""
    H = h_eff.matrix if isinstance(h_eff, EffectiveHamiltonian) else np.asarray(h_eff)
    return itc_from_spectrum(eigendecompose(H))


def roundtrip_error(h_eff: EffectiveHamiltonian, u) -> float:
    return float(np.abs(expm(-1j * h_eff.matrix * h_eff.horizon) - np.asarray(u)).max())
