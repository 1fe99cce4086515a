"""Threshold clustering of nodes under a (semi-)distance.

Nodes ``a`` and ``b`` are related at level ``eps`` when ``d(a, b) < eps``;
clusters are the connected components of that relation. Sweeping ``eps``
through the distinct distance values gives a nested hierarchy. A cluster is
kept as *valid* when its largest internal distance is smaller than the
smallest distance from any member to a non-member.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.csgraph import connected_components


@dataclass
class Cluster:
    members: tuple
    birth: float
    merge_distance: float
    valid: bool
    parent: int | None = None
    children: list = field(default_factory=list)


@dataclass
class ClusterTree:
    n: int
    clusters: list
    thresholds: np.ndarray

    @property
    def root(self) -> int:
        return max(range(len(self.clusters)), key=lambda k: len(self.clusters[k].members))

    def valid_clusters(self, include_leaves: bool = False) -> list:
        return [c for c in self.clusters if c.valid and (include_leaves or len(c.members) > 1)]

    def earliest_valid(self) -> list:
        """Non-singleton valid clusters born at the smallest level."""
        cands = self.valid_clusters()
        if not cands:
            return []
        first = min(c.merge_distance for c in cands)
        return [c for c in cands if c.merge_distance == first]

    def to_json(self, one_based: bool = False) -> str:
        return json.dumps(self.to_dict(one_based), indent=2)

    def to_dict(self, one_based: bool = False) -> dict:
        off = 1 if one_based else 0

        def node(k):
            c = self.clusters[k]
            return {
                "id": k,
                "members": [m + off for m in c.members],
                "birth_eps": c.birth,
                "merge_distance": c.merge_distance,
                "valid": c.valid,
                "children": [node(ch) for ch in c.children],
            }

        return node(self.root)

    def to_csv(self, one_based: bool = False) -> str:
        off = 1 if one_based else 0
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["cluster_id", "parent_id", "eps", "merge_distance", "valid", "members"])
        for k, c in enumerate(self.clusters):
            w.writerow([k, "" if c.parent is None else c.parent, repr(c.birth), repr(c.merge_distance),
                        int(c.valid), " ".join(str(m + off) for m in c.members)])
        return buf.getvalue()


def clusters_at(dist, epsilon: float) -> list:
    """Components of the graph with edges ``d(a, b) < epsilon``, sorted by first member."""
    D = np.asarray(dist, dtype=float)
    if epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    adj = D < epsilon
    np.fill_diagonal(adj, False)
    _, labels = connected_components(adj, directed=False)
    groups = {}
    for node, lab in enumerate(labels):
        groups.setdefault(lab, []).append(node)
    return sorted(groups.values(), key=lambda c: c[0])


def _is_valid(D, members):
    members = list(members)
    inside = np.zeros(len(D), dtype=bool)
    inside[members] = True
    if inside.all():
        return True
    intra = D[np.ix_(members, members)].max() if len(members) > 1 else 0.0
    inter = D[np.ix_(members, np.flatnonzero(~inside))].min()
    return bool(intra < inter)


def hierarchical_clusters(dist, tie_tol: float = 1e-12) -> ClusterTree:
    """Every component formed while sweeping ``eps`` upward, with validity flags.

    Distance values within ``tie_tol`` of each other are treated as one
    threshold. ``birth`` is the smallest float above the merge distance, so
    ``clusters_at(dist, c.birth)`` reproduces cluster ``c``.
    """
    D = np.asarray(dist, dtype=float)
    n = len(D)
    iu = np.triu_indices(n, 1)
    vals = np.unique(D[iu][np.isfinite(D[iu])])
    if tie_tol > 0 and len(vals):
        keep = np.concatenate([[True], np.diff(vals) > tie_tol])
        # take the top of each tie run so the whole run is merged at once
        ends = np.append(np.flatnonzero(keep)[1:] - 1, len(vals) - 1)
        vals = vals[ends]

    clusters = [Cluster((k,), 0.0, 0.0, _is_valid(D, (k,))) for k in range(n)]
    seen = {c.members: idx for idx, c in enumerate(clusters)}
    for v in vals:
        eps = float(np.nextafter(v, np.inf))
        for comp in clusters_at(D, eps):
            key = tuple(comp)
            if key not in seen:
                seen[key] = len(clusters)
                clusters.append(Cluster(key, eps, float(v), _is_valid(D, key)))
    if n and tuple(range(n)) not in seen:
        # disconnected by infinite distances: the root only forms at eps -> inf
        seen[tuple(range(n))] = len(clusters)
        clusters.append(Cluster(tuple(range(n)), np.inf, np.inf, True))

    sets = [frozenset(c.members) for c in clusters]
    for k, s in enumerate(sets):
        supers = [q for q, t in enumerate(sets) if s < t]
        if supers:
            p = min(supers, key=lambda q: len(sets[q]))
            clusters[k].parent = p
            clusters[p].children.append(k)
    return ClusterTree(n, clusters, vals)
