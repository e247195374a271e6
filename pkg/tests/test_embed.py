from __future__ import annotations

import numpy as np
import pytest

from readmap.cooccur import DistanceMatrix
from readmap.embed import Embedding, EmbeddingConfig, mds_embed, stress


def distance_matrix_from_points(pts, prefix="d"):
    labels = tuple(f"{prefix}{i:03d}" for i in range(len(pts)))
    diff = pts[:, None, :] - pts[None, :, :]
    return DistanceMatrix(labels=labels, values=np.sqrt((diff**2).sum(axis=2)))


def random_distances(rng, n):
    # arbitrary symmetric dissimilarities, not necessarily Euclidean
    raw = rng.uniform(0.1, 2.0, size=(n, n))
    values = (raw + raw.T) / 2
    np.fill_diagonal(values, 0.0)
    return DistanceMatrix(labels=tuple(f"r{i:02d}" for i in range(n)), values=values)


def test_trace_never_increases():
    for seed in range(20):
        d = random_distances(np.random.default_rng(seed), 15)
        _, trace = mds_embed(d, EmbeddingConfig(seed=seed))
        diffs = np.diff(trace.values)
        assert (diffs <= 1e-12).all(), f"seed {seed} increased stress"


def test_embeddable_configuration_recovers():
    pts = np.random.default_rng(425).uniform(-1, 1, size=(20, 2))
    d = distance_matrix_from_points(pts)
    emb, trace = mds_embed(d, EmbeddingConfig(max_iterations=2000, rel_tol=1e-14, seed=1))
    assert trace.values[-1] <= 1e-9
    # recovered inter-point distances match the targets
    diff = emb.positions[:, None, :] - emb.positions[None, :, :]
    got = np.sqrt((diff**2).sum(axis=2))
    assert np.allclose(got, d.values, atol=1e-5)


def test_positions_centered():
    d = random_distances(np.random.default_rng(3), 12)
    emb, _ = mds_embed(d, EmbeddingConfig(seed=3))
    assert np.abs(emb.positions.mean(axis=0)).max() < 1e-9


def test_orientation_is_canonical():
    """Principal axis on x, second moment descending, signs pinned."""
    d = random_distances(np.random.default_rng(8), 10)
    emb, _ = mds_embed(d, EmbeddingConfig(seed=8))
    cov = np.cov(emb.positions.T)
    assert cov[0, 0] >= cov[1, 1] - 1e-12
    assert abs(cov[0, 1]) < 1e-9
    for axis in range(2):
        col = emb.positions[:, axis]
        nonzero = col[np.abs(col) > 1e-12]
        if len(nonzero):
            assert nonzero[0] > 0


def test_deterministic_for_same_seed():
    d = random_distances(np.random.default_rng(5), 14)
    emb1, trace1 = mds_embed(d, EmbeddingConfig(seed=7))
    emb2, trace2 = mds_embed(d, EmbeddingConfig(seed=7))
    assert np.array_equal(emb1.positions, emb2.positions)
    assert trace1.values == trace2.values


def test_trace_starts_at_initial_stress_and_converges_early():
    d = random_distances(np.random.default_rng(2), 10)
    cfg = EmbeddingConfig(max_iterations=500, rel_tol=1e-4, seed=2)
    emb, trace = mds_embed(d, cfg)
    assert len(trace.values) >= 2
    assert len(trace.values) < 500  # rel_tol stops it well before the cap
    assert trace.values[-1] == pytest.approx(stress(emb, d))


def test_single_point_at_origin():
    d = DistanceMatrix(labels=("only",), values=np.zeros((1, 1)))
    emb, trace = mds_embed(d)
    assert np.array_equal(emb.positions, np.zeros((1, 2)))
    assert trace.values == (0.0,)


def test_all_zero_distances_collapse():
    d = DistanceMatrix(labels=("a", "b", "c"), values=np.zeros((3, 3)))
    emb, trace = mds_embed(d)
    assert np.array_equal(emb.positions, np.zeros((3, 2)))
    assert trace.values == (0.0,)


def test_non_finite_distances_rejected():
    values = np.zeros((2, 2))
    values[0, 1] = values[1, 0] = np.nan
    with pytest.raises(ValueError):
        mds_embed(DistanceMatrix(labels=("a", "b"), values=values))


def test_stress_label_mismatch_rejected():
    d = random_distances(np.random.default_rng(1), 5)
    emb = Embedding(labels=("x",) * 5, positions=np.zeros((5, 2)))
    with pytest.raises(ValueError):
        stress(emb, d)


def test_config_validation():
    with pytest.raises(ValueError):
        EmbeddingConfig(max_iterations=0)
    with pytest.raises(ValueError):
        EmbeddingConfig(rel_tol=-1.0)
