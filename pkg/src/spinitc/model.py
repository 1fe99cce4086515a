"""Spin networks and their single-excitation Hamiltonians.

Nodes are indexed from 0 throughout the library. Coupling strengths are
dimensionless (hbar = 1), so time is measured in units of 1/J.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np


class InvalidNetworkError(ValueError):
    """Raised when a network description is malformed."""


class DegenerateGeometryError(InvalidNetworkError):
    """Raised when two spins share a position."""


class CouplingKind(enum.Enum):
    XX = "xx"
    HEISENBERG = "heisenberg"

    @classmethod
    def parse(cls, value: "CouplingKind | str") -> "CouplingKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise InvalidNetworkError(
                f"unknown coupling kind {value!r}; expected 'xx' or 'heisenberg'"
            ) from None


@dataclass(frozen=True, eq=False)
class SpinNetwork:
    """A network of ``n`` spins with symmetric, non-negative couplings.

    Parameters
    ----------
    kind : CouplingKind
        XX or Heisenberg interaction.
    couplings : (n, n) array
        Coupling strengths ``J[i, j]``; symmetric, zero diagonal, ``>= 0``.
    positions : (n, 2) array, optional
        Planar coordinates of the spins, if the network was built from them.
    """

    kind: CouplingKind
    couplings: np.ndarray
    positions: np.ndarray | None = field(default=None)

    def __post_init__(self):
        J = np.array(self.couplings, dtype=float)
        if J.ndim != 2 or J.shape[0] != J.shape[1] or J.shape[0] < 1:
            raise InvalidNetworkError(f"couplings must be a square matrix, got shape {J.shape}")
        if not np.all(np.isfinite(J)):
            raise InvalidNetworkError("couplings contain non-finite entries")
        asym = np.argwhere(J != J.T)
        if len(asym):
            i, j = asym[0]
            raise InvalidNetworkError(
                f"couplings not symmetric at ({i}, {j}): {J[i, j]!r} != {J[j, i]!r}"
            )
        if np.any(np.diag(J) != 0):
            raise InvalidNetworkError("couplings must have a zero diagonal")
        if np.any(J < 0):
            i, j = np.argwhere(J < 0)[0]
            raise InvalidNetworkError(f"negative coupling at ({i}, {j})")
        J.setflags(write=False)
        object.__setattr__(self, "couplings", J)
        object.__setattr__(self, "kind", CouplingKind.parse(self.kind))
        if self.positions is not None:
            P = np.array(self.positions, dtype=float)
            if P.shape != (J.shape[0], 2):
                raise InvalidNetworkError(
                    f"positions must have shape ({J.shape[0]}, 2), got {P.shape}"
                )
            P.setflags(write=False)
            object.__setattr__(self, "positions", P)

    @property
    def n(self) -> int:
        return self.couplings.shape[0]


def build_chain(n: int, kind: CouplingKind | str = CouplingKind.XX, j: float = 1.0) -> SpinNetwork:
    """Homogeneous nearest-neighbour chain of ``n`` spins with coupling ``j``."""
    if int(n) != n or n < 2:
        raise InvalidNetworkError(f"a chain needs at least 2 spins, got {n}")
    if not j > 0:
        raise InvalidNetworkError(f"coupling must be positive, got {j}")
    n = int(n)
    J = np.zeros((n, n))
    idx = np.arange(n - 1)
    J[idx, idx + 1] = j
    J[idx + 1, idx] = j
    return SpinNetwork(CouplingKind.parse(kind), J)


def build_geometric_network(positions, kind: CouplingKind | str = CouplingKind.XX,
                            exponent: float = 3.0) -> SpinNetwork:
    """Network whose couplings decay as ``r**-exponent`` with planar distance ``r``."""
    P = np.asarray(positions, dtype=float)
    if P.ndim != 2 or P.shape[1] != 2:
        raise InvalidNetworkError(f"positions must be a list of (x, y) points, got shape {P.shape}")
    if len(P) < 2:
        raise InvalidNetworkError("a geometric network needs at least 2 points")
    if not exponent > 0:
        raise InvalidNetworkError(f"exponent must be positive, got {exponent}")
    r = np.sqrt(((P[:, None, :] - P[None, :, :]) ** 2).sum(-1))
    off = ~np.eye(len(P), dtype=bool)
    if np.any(r[off] == 0):
        i, j = np.argwhere((r == 0) & off)[0]
        raise DegenerateGeometryError(f"spins {i} and {j} are at the same position")
    J = np.zeros_like(r)
    J[off] = r[off] ** (-exponent)
    return SpinNetwork(CouplingKind.parse(kind), J, positions=P)


def single_excitation_hamiltonian(net: SpinNetwork) -> np.ndarray:
    """Hamiltonian restricted to the one-excitation subspace.

    Off-diagonal entries are the couplings. For Heisenberg coupling the
    diagonal carries ``-sum_m J[i, m]``; for XX it is zero. Any shift by a
    multiple of the identity or positive rescaling leaves transfer maxima
    unchanged.
    """
    H = np.array(net.couplings, dtype=float)
    if net.kind is CouplingKind.HEISENBERG:
        H[np.diag_indices_from(H)] = -H.sum(axis=1)
    return H
