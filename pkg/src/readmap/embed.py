"""2D metric MDS by stress majorization (SMACOF).

Each majorization step applies the Guttman transform, which never
increases stress, so the per-iteration trace is non-increasing. The
final configuration is centered, rotated to its principal axes, and
reflection-normalized so identical inputs produce identical output.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cooccur import DistanceMatrix

_COINCIDENT_EPS = 1e-9


@dataclass(frozen=True)
class EmbeddingConfig:
    max_iterations: int = 300
    rel_tol: float = 1e-6
    seed: int = 0

    def __post_init__(self) -> None:
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        if self.rel_tol <= 0:
            raise ValueError("rel_tol must be positive")


@dataclass(frozen=True, eq=False)
class Embedding:
    labels: tuple[str, ...]
    positions: np.ndarray  # (n, 2) float64, centered

    @property
    def n(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class StressTrace:
    values: tuple[float, ...]


def _pairwise_distances(x: np.ndarray) -> np.ndarray:
    diff = x[:, None, :] - x[None, :, :]
    return np.sqrt((diff * diff).sum(axis=2))


def stress(e: Embedding, d: DistanceMatrix) -> float:
    """Normalized stress: sum of squared residuals over sum of squared targets."""
    if e.labels != d.labels:
        raise ValueError("label mismatch between embedding and distance matrix")
    return _normalized_stress(e.positions, d.values)


def _normalized_stress(x: np.ndarray, targets: np.ndarray) -> float:
    iu = np.triu_indices(len(x), k=1)
    denom = float((targets[iu] ** 2).sum())
    if denom == 0.0:
        return 0.0
    deltas = _pairwise_distances(x)[iu]
    return float(((deltas - targets[iu]) ** 2).sum() / denom)


def _separate_coincident(x: np.ndarray) -> np.ndarray:
    """Nudge exactly coincident points apart so the Guttman transform is defined.

    The later point of each coincident pair moves by a tiny deterministic
    offset, first along x, then along y if that was not enough.
    """
    for axis in (0, 1):
        delta = _pairwise_distances(x)
        np.fill_diagonal(delta, np.inf)
        ii, jj = np.nonzero(delta < _COINCIDENT_EPS / 10)
        if ii.size == 0:
            return x
        x = x.copy()
        bump = 0
        for i, j in zip(ii, jj):
            if i < j:
                bump += 1
                x[j, axis] += _COINCIDENT_EPS * bump
    return x


def _guttman_step(x: np.ndarray, targets: np.ndarray) -> np.ndarray:
    n = len(x)
    x = _separate_coincident(x)
    delta = _pairwise_distances(x)
    np.fill_diagonal(delta, 1.0)  # diagonal ratio is zero anyway (targets diag is 0)
    ratio = targets / delta
    b = -ratio
    np.fill_diagonal(b, 0.0)
    np.fill_diagonal(b, -b.sum(axis=1))
    return (b @ x) / n


def _canonical_orientation(x: np.ndarray) -> np.ndarray:
    """Center, rotate to principal axes (major axis horizontal), fix reflections.

    Reflections are resolved per axis: the first point in label order with
    a non-negligible coordinate is forced into the non-negative half-plane.
    """
    x = x - x.mean(axis=0)
    cov = x.T @ x
    evals, evecs = np.linalg.eigh(cov)
    rotation = evecs[:, ::-1]  # descending eigenvalues: first axis horizontal
    x = x @ rotation
    for axis in (0, 1):
        for i in range(len(x)):
            if abs(x[i, axis]) > 1e-12:
                if x[i, axis] < 0:
                    x[:, axis] = -x[:, axis]
                break
    return x - x.mean(axis=0)


def mds_embed(d: DistanceMatrix, cfg: EmbeddingConfig | None = None) -> tuple[Embedding, StressTrace]:
    """Embed a distance matrix in the plane by SMACOF majorization.

    Starts from a seeded uniform configuration in [-0.5, 0.5]^2 and
    iterates until the relative stress decrease drops below rel_tol or
    max_iterations is reached.
    """
    cfg = cfg or EmbeddingConfig()
    targets = np.asarray(d.values, dtype=np.float64)
    if not np.all(np.isfinite(targets)):
        raise ValueError("distance matrix contains non-finite values")
    n = d.n
    if n == 1:
        return Embedding(d.labels, np.zeros((1, 2))), StressTrace((0.0,))

    iu = np.triu_indices(n, k=1)
    if float((targets[iu] ** 2).sum()) == 0.0:
        # all targets zero: every point belongs at the origin
        return Embedding(d.labels, np.zeros((n, 2))), StressTrace((0.0,))

    rng = np.random.default_rng(cfg.seed)
    x = rng.uniform(-0.5, 0.5, size=(n, 2))
    sigma = _normalized_stress(x, targets)
    trace = [sigma]
    for _ in range(cfg.max_iterations):
        x = _guttman_step(x, targets)
        new_sigma = _normalized_stress(x, targets)
        trace.append(new_sigma)
        if sigma == 0.0 or (sigma - new_sigma) / sigma < cfg.rel_tol:
            sigma = new_sigma
            break
        sigma = new_sigma

    x = _canonical_orientation(x)
    return Embedding(d.labels, x), StressTrace(tuple(trace))
