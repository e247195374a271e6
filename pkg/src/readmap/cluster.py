"""Agglomerative grouping of embedded documents into topic areas.

Ward's minimum-variance criterion on the 2D coordinates, so that area
membership always agrees with visual proximity on the map.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .embed import Embedding
from .errors import ReadmapError

__all__ = [
    "Merge",
    "Dendrogram",
    "ClusterAssignment",
    "ward_cluster",
    "cut",
    "select_k",
]


@dataclass(frozen=True)
class Merge:
    """One agglomeration step: two node ids and the variance increase it cost."""

    left: int
    right: int
    cost: float


@dataclass(frozen=True, eq=False)
class Dendrogram:
    """Full merge history.

    Leaves are numbered 0..n-1 in the order of ``leaves`` (ascending doc_id,
    matching the embedding's label order); the node created by merge i has
    id n + i. Merge costs are non-decreasing.
    """

    leaves: tuple[str, ...]
    merges: tuple[Merge, ...]

    @property
    def n(self) -> int:
        return len(self.leaves)


@dataclass(frozen=True, eq=False)
class ClusterAssignment:
    """Maps every doc_id to an area index in [0, k)."""

    k: int
    area_of: Mapping[str, int] = field(repr=False)

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("k must be positive")
        seen = set(self.area_of.values())
        if seen != set(range(self.k)):
            raise ValueError("area indices must cover [0, k) with none empty")

    def members(self) -> dict[int, tuple[str, ...]]:
        """Area index -> member doc_ids, ascending."""
        out: dict[int, list[str]] = {a: [] for a in range(self.k)}
        for doc_id in sorted(self.area_of):
            out[self.area_of[doc_id]].append(doc_id)
        return {a: tuple(docs) for a, docs in out.items()}


@dataclass
class _Cluster:
    centroid: np.ndarray
    size: int
    label: str  # smallest member doc_id, used for deterministic tie-breaks


def _ward_cost(a: _Cluster, b: _Cluster) -> float:
    # Variance increase of merging two clusters, from centroids and sizes:
    # |A||B| / (|A|+|B|) * ||c_A - c_B||^2
    diff = a.centroid - b.centroid
    return float(a.size * b.size / (a.size + b.size) * (diff @ diff))


def ward_cluster(e: Embedding) -> Dendrogram:
    """Greedy Ward agglomeration of the embedded points.

    Each step merges the active pair with the smallest variance increase;
    exact cost ties fall back to the lexicographically smallest
    (left label, right label) pair, labels being each cluster's smallest
    doc_id. Deterministic for identical inputs.
    """
    n = len(e.labels)
    if n < 1:
        raise ReadmapError("cannot cluster an empty embedding")

    active: dict[int, _Cluster] = {
        i: _Cluster(centroid=e.positions[i].astype(float).copy(), size=1, label=e.labels[i])
        for i in range(n)
    }
    merges: list[Merge] = []

    while len(active) > 1:
        # Scan in label order so the (cost, left label, right label) key is
        # well defined; O(n^3) total, fine at map scale.
        items = sorted(active.items(), key=lambda kv: kv[1].label)
        best_key: tuple[float, str, str] | None = None
        best_pair: tuple[int, int] | None = None
        for i in range(len(items)):
            node_a, ca = items[i]
            for j in range(i + 1, len(items)):
                node_b, cb = items[j]
                key = (_ward_cost(ca, cb), ca.label, cb.label)
                if best_key is None or key < best_key:
                    best_key = key
                    best_pair = (node_a, node_b)
        assert best_pair is not None and best_key is not None
        left, right = best_pair
        a, b = active.pop(left), active.pop(right)
        merged = _Cluster(
            centroid=(a.size * a.centroid + b.size * b.centroid) / (a.size + b.size),
            size=a.size + b.size,
            label=min(a.label, b.label),
        )
        new_node = n + len(merges)
        merges.append(Merge(left=left, right=right, cost=best_key[0]))
        active[new_node] = merged

    return Dendrogram(leaves=tuple(e.labels), merges=tuple(merges))


def cut(
    dg: Dendrogram,
    k: int,
    reader_counts: Mapping[str, int] | None = None,
) -> ClusterAssignment:
    """Partition into k areas by dropping the k-1 most expensive merges.

    Costs are non-decreasing, so that means replaying only the first n-k
    merges. Area indices are ordered by descending combined readership, then
    ascending smallest doc_id; without reader counts only the doc_id rule
    applies.
    """
    n = dg.n
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")

    parent = list(range(n + len(dg.merges)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, m in enumerate(dg.merges[: n - k]):
        new_node = n + i
        parent[find(m.left)] = new_node
        parent[find(m.right)] = new_node

    groups: dict[int, list[str]] = {}
    for leaf, doc_id in enumerate(dg.leaves):
        groups.setdefault(find(leaf), []).append(doc_id)

    counts = reader_counts or {}

    def order_key(docs: list[str]) -> tuple[int, str]:
        combined = sum(counts.get(d, 0) for d in docs)
        return (-combined, min(docs))

    area_of: dict[str, int] = {}
    for index, docs in enumerate(sorted(groups.values(), key=order_key)):
        for doc_id in docs:
            area_of[doc_id] = index
    return ClusterAssignment(k=k, area_of=area_of)


def _mean_silhouette(dist: np.ndarray, labels: np.ndarray) -> float:
    # Standard mean silhouette; singleton clusters score 0, as does any
    # point whose cohesion and separation are both zero.
    n = len(labels)
    unique = np.unique(labels)
    masks = {lab: labels == lab for lab in unique}
    scores = np.zeros(n)
    for i in range(n):
        own = masks[labels[i]]
        own_size = int(own.sum())
        if own_size <= 1:
            continue
        a = dist[i][own].sum() / (own_size - 1)
        b = min(dist[i][masks[lab]].mean() for lab in unique if lab != labels[i])
        denom = max(a, b)
        if denom > 0:
            scores[i] = (b - a) / denom
    return float(scores.mean())


def select_k(dg: Dendrogram, e: Embedding, k_min: int, k_max: int) -> int:
    """Pick the area count in [k_min, k_max] with the best mean silhouette.

    Silhouette is computed over Euclidean distances in the embedding; exact
    score ties go to the smaller k.
    """
    n = dg.n
    if n < 3:
        raise ValueError("area-count selection needs at least 3 documents")
    if not 2 <= k_min <= k_max <= n - 1:
        raise ValueError(f"need 2 <= k_min <= k_max <= {n - 1}, got [{k_min}, {k_max}]")
    if tuple(dg.leaves) != tuple(e.labels):
        raise ValueError("dendrogram and embedding cover different documents")

    diff = e.positions[:, None, :] - e.positions[None, :, :]
    dist = np.sqrt((diff**2).sum(axis=2))
    leaf_index = {doc_id: i for i, doc_id in enumerate(dg.leaves)}

    best_k = k_min
    best_score = -np.inf
    for k in range(k_min, k_max + 1):
        assignment = cut(dg, k)
        labels = np.empty(n, dtype=int)
        for doc_id, area in assignment.area_of.items():
            labels[leaf_index[doc_id]] = area
        score = _mean_silhouette(dist, labels)
        if score > best_score:
            best_score = score
            best_k = k
    return best_k
