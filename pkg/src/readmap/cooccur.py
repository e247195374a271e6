"""Co-readership matrix and the similarity/distance matrices derived from it."""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO

import numpy as np

from .corpus import Corpus
from .errors import ReadmapError

SCHEMES = ("cosine", "jaccard", "raw_scaled")


@dataclass(frozen=True, eq=False)
class CooccurrenceMatrix:
    """Symmetric distinct-reader overlap counts; diagonal holds reader counts."""

    labels: tuple[str, ...]
    counts: np.ndarray  # (n, n) int64

    @property
    def n(self) -> int:
        return len(self.labels)


@dataclass(frozen=True, eq=False)
class SimilarityMatrix:
    labels: tuple[str, ...]
    values: np.ndarray  # (n, n) float64 in [0, 1]
    scheme: str

    @property
    def n(self) -> int:
        return len(self.labels)


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    labels: tuple[str, ...]
    values: np.ndarray  # (n, n) float64, zero diagonal

    @property
    def n(self) -> int:
        return len(self.labels)


def build_cooccurrence(corpus: Corpus) -> CooccurrenceMatrix:
    """Count, for every document pair, the readers they share.

    counts[i][j] = |readers(i) ∩ readers(j)| for i != j and the diagonal
    holds each document's own reader count. Label order is ascending
    doc_id, so the result is deterministic.
    """
    if not corpus.documents:
        raise ReadmapError("cannot build a co-occurrence matrix from an empty corpus")
    labels = tuple(sorted(corpus.doc_ids()))
    col = {doc_id: i for i, doc_id in enumerate(labels)}
    users = sorted({ev.user_id for ev in corpus.events})
    row = {user_id: i for i, user_id in enumerate(users)}
    incidence = np.zeros((len(users), len(labels)), dtype=np.int64)
    for ev in corpus.events:
        incidence[row[ev.user_id], col[ev.doc_id]] = 1
    counts = incidence.T @ incidence
    return CooccurrenceMatrix(labels=labels, counts=counts)


def normalize(m: CooccurrenceMatrix, scheme: str = "cosine") -> SimilarityMatrix:
    """Turn overlap counts into similarities in [0, 1].

    cosine:     c_ij / sqrt(c_ii * c_jj)
    jaccard:    c_ij / (c_ii + c_jj - c_ij)
    raw_scaled: c_ij / max off-diagonal count

    Documents with no readers are isolated: off-diagonal similarity 0.
    The diagonal is 1 by definition.
    """
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r} (expected one of {', '.join(SCHEMES)})")
    c = m.counts.astype(np.float64)
    n = m.n
    if scheme == "cosine":
        diag = np.diag(c)
        denom = np.sqrt(np.outer(diag, diag))
        with np.errstate(divide="ignore", invalid="ignore"):
            values = np.where(denom > 0, c / denom, 0.0)
    elif scheme == "jaccard":
        diag = np.diag(c)
        denom = diag[:, None] + diag[None, :] - c
        with np.errstate(divide="ignore", invalid="ignore"):
            values = np.where(denom > 0, c / denom, 0.0)
    else:
        off = m.counts[~np.eye(n, dtype=bool)]
        max_off = int(off.max()) if off.size else 0
        if n > 1 and max_off == 0:
            raise ReadmapError("no co-readership signal")
        values = c / max_off if max_off > 0 else np.zeros_like(c)
    np.fill_diagonal(values, 1.0)
    return SimilarityMatrix(labels=m.labels, values=values, scheme=scheme)


def to_distance(s: SimilarityMatrix) -> DistanceMatrix:
    """d = 1 - s, with an exactly zero diagonal."""
    values = 1.0 - s.values
    np.fill_diagonal(values, 0.0)
    return DistanceMatrix(labels=s.labels, values=values)


def write_matrix(labels: tuple[str, ...], values: np.ndarray, out: IO[str]) -> None:
    """Dump a square matrix as tab-separated text with a label header row."""
    out.write("\t".join(("", *labels)) + "\n")
    for label, row in zip(labels, values):
        cells = (str(int(v)) if float(v).is_integer() else format(float(v), ".6g") for v in row)
        out.write("\t".join((label, *cells)) + "\n")
