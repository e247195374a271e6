"""Bubble geometry: area circles sized by readership, documents packed inside.

All coordinates are abstract canvas units; the client scales to pixels.
Every routine is deterministic for fixed inputs and seed.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .cluster import ClusterAssignment
from .embed import Embedding
from .errors import LayoutError

__all__ = [
    "AreaLayout",
    "DocumentLayout",
    "MapLayout",
    "area_radius",
    "place_areas",
    "pack_documents",
    "build_layout",
    "DEFAULT_CANVAS",
]

logger = logging.getLogger(__name__)

DEFAULT_CANVAS: tuple[float, float] = (1000.0, 1000.0)

# Fractions of the canvas' smaller dimension.
AREA_R_MAX_FRAC = 0.30
AREA_R_MIN_FRAC = 0.02
DOC_R_MIN_FRAC = 0.008

# A document circle never exceeds this fraction of its bubble's radius, so a
# pair of maximal circles still fits side by side with slack.
DOC_R_MAX_OF_AREA = 0.45

# Density ceiling for circles packed into a bubble.
PACK_DENSITY_MAX = 0.7

SEPARATION_SWEEPS = 500
PACK_ITERATIONS = 200
_CLEANUP_SWEEPS = 2000


@dataclass(frozen=True)
class AreaLayout:
    area_id: int
    center: tuple[float, float]
    radius: float
    combined_readers: int


@dataclass(frozen=True)
class DocumentLayout:
    doc_id: str
    position: tuple[float, float]
    radius: float


@dataclass(frozen=True, eq=False)
class MapLayout:
    canvas: tuple[float, float]
    areas: tuple[AreaLayout, ...]
    documents: tuple[DocumentLayout, ...]


def area_radius(
    combined_readers: int,
    total_readers: int,
    r_max: float,
    r_min: float = 0.0,
) -> float:
    """Radius for a bubble whose AREA is proportional to its readership share.

    r = max(r_min, r_max * sqrt(combined / total)). The floor keeps small
    areas visible and clickable.
    """
    if total_readers <= 0:
        raise ValueError("total_readers must be positive")
    if combined_readers < 0 or combined_readers > total_readers:
        raise ValueError("combined_readers must be in [0, total_readers]")
    return max(r_min, r_max * math.sqrt(combined_readers / total_readers))


def _scaled_positions(
    positions: np.ndarray, canvas: tuple[float, float], margin: float
) -> np.ndarray:
    # Uniformly scale the embedding's bounding box into the canvas minus a
    # margin, preserving aspect ratio; degenerate extents collapse to center.
    width, height = canvas
    lo = positions.min(axis=0)
    hi = positions.max(axis=0)
    extent = hi - lo
    inner = np.array([width - 2 * margin, height - 2 * margin])
    if inner.min() <= 0:
        raise LayoutError("canvas too small")
    scales = [inner[d] / extent[d] for d in range(2) if extent[d] > 0]
    s = min(scales) if scales else 0.0
    center_in = (lo + hi) / 2
    center_out = np.array([width / 2, height / 2])
    return (positions - center_in) * s + center_out


def _separate_circles(
    centers: np.ndarray,
    radii: np.ndarray,
    bound: tuple[float, float] | AreaLayout,
    pad: float,
    max_sweeps: int,
) -> bool:
    """Deterministic pairwise push-apart; returns True once overlap-free.

    Pairs are visited in index order each sweep, overlapping pairs are pushed
    apart along their center line by half the shortfall each (coincident
    centers break the tie along +x), then everything is clamped back into the
    bounding region (a rectangle, or an enclosing circle for in-bubble use).
    """
    m = len(centers)
    for _ in range(max_sweeps):
        moved = False
        for i in range(m):
            for j in range(i + 1, m):
                d = centers[j] - centers[i]
                dist = float(np.hypot(d[0], d[1]))
                need = radii[i] + radii[j] + pad
                if dist >= need:
                    continue
                direction = np.array([1.0, 0.0]) if dist < 1e-12 else d / dist
                # Push past the test threshold so rounding can't re-trigger.
                shift = (need + pad - dist) / 2
                centers[i] -= direction * shift
                centers[j] += direction * shift
                moved = True
        if isinstance(bound, AreaLayout):
            cx, cy = bound.center
            hub = np.array([cx, cy])
            for i in range(m):
                off = centers[i] - hub
                limit = bound.radius - radii[i]
                norm = float(np.hypot(off[0], off[1]))
                if norm > limit:
                    centers[i] = hub + off * (limit / norm)
        else:
            width, height = bound
            for i in range(m):
                centers[i, 0] = min(max(centers[i, 0], radii[i]), width - radii[i])
                centers[i, 1] = min(max(centers[i, 1], radii[i]), height - radii[i])
        if not moved:
            return True
    return False


def place_areas(
    e: Embedding,
    assignment: ClusterAssignment,
    readers_by_area: Mapping[int, int],
    canvas: tuple[float, float] = DEFAULT_CANVAS,
    r_max: float | None = None,
    r_min: float | None = None,
) -> list[AreaLayout]:
    """Position one bubble per area, sized by readership share.

    Initial centers are the centroids of member documents' embedded positions
    scaled into the canvas, so relative centrality carries over from the
    embedding. Overlaps are then resolved by a bounded deterministic
    separation sweep. Raises LayoutError when the bubbles cannot fit.
    """
    width, height = canvas
    min_dim = min(width, height)
    if r_max is None:
        r_max = AREA_R_MAX_FRAC * min_dim
    if r_min is None:
        r_min = AREA_R_MIN_FRAC * min_dim

    area_ids = sorted(set(assignment.area_of.values()))
    total = sum(readers_by_area[a] for a in area_ids)
    if total > 0:
        radii = np.array(
            [area_radius(readers_by_area[a], total, r_max, r_min) for a in area_ids]
        )
    else:
        radii = np.full(len(area_ids), r_min)

    if math.pi * float((radii**2).sum()) > PACK_DENSITY_MAX * width * height:
        raise LayoutError("canvas too small")

    if len(area_ids) == 1:
        return [
            AreaLayout(
                area_id=area_ids[0],
                center=(width / 2, height / 2),
                radius=float(radii[0]),
                combined_readers=readers_by_area[area_ids[0]],
            )
        ]

    index_of = {doc_id: i for i, doc_id in enumerate(e.labels)}
    scaled = _scaled_positions(e.positions, canvas, margin=float(radii.max()))
    centers = np.zeros((len(area_ids), 2))
    for row, a in enumerate(area_ids):
        member_rows = [index_of[d] for d, area in assignment.area_of.items() if area == a]
        centers[row] = scaled[sorted(member_rows)].mean(axis=0)

    pad = 1e-7 * min_dim
    if not _separate_circles(centers, radii, (width, height), pad, SEPARATION_SWEEPS):
        raise LayoutError("canvas too small")

    return [
        AreaLayout(
            area_id=a,
            center=(float(centers[row, 0]), float(centers[row, 1])),
            radius=float(radii[row]),
            combined_readers=readers_by_area[a],
        )
        for row, a in enumerate(area_ids)
    ]


def pack_documents(
    area: AreaLayout,
    members: Sequence[tuple[str, int]],
    seed: int,
    doc_r_min: float = 0.0,
    doc_r_max: float | None = None,
) -> list[DocumentLayout]:
    """Place member document circles inside a bubble, overlap-free.

    Radii scale with sqrt(readers / max readers in the area), capped at a
    fraction of the bubble radius and floored at doc_r_min. If the circles
    would exceed the density ceiling they are shrunk uniformly with a
    warning. Placement runs a fixed-count force loop (pairwise push-apart on
    overlap plus a decaying pull to the bubble center) from seeded evenly
    spaced starting angles, then bounded cleanup sweeps remove any residual
    overlap. Deterministic for a fixed seed.
    """
    if not members:
        raise ValueError("area has no documents")
    cap = DOC_R_MAX_OF_AREA * area.radius
    doc_r_max = cap if doc_r_max is None else min(doc_r_max, cap)
    doc_r_min = min(doc_r_min, doc_r_max)

    ordered = sorted(members, key=lambda item: (-item[1], item[0]))
    max_readers = max(readers for _, readers in ordered)
    radii = np.array(
        [
            max(doc_r_min, doc_r_max * math.sqrt(readers / max_readers))
            if max_readers > 0
            else doc_r_min
            for _, readers in ordered
        ]
    )

    total_sq = float((radii**2).sum())
    budget = PACK_DENSITY_MAX * area.radius**2
    if total_sq > budget:
        radii *= math.sqrt(budget / total_sq)
        logger.warning(
            "area %d: document circles exceed packing density, radii rescaled",
            area.area_id,
        )

    hub = np.array(area.center)
    m = len(ordered)
    if m == 1:
        return [
            DocumentLayout(
                doc_id=ordered[0][0],
                position=(float(hub[0]), float(hub[1])),
                radius=float(radii[0]),
            )
        ]

    rng = np.random.default_rng(seed)
    theta0 = rng.uniform(0.0, 2.0 * math.pi)
    centers = np.zeros((m, 2))
    for j in range(m):
        theta = theta0 + 2.0 * math.pi * j / m
        rho = 0.5 * (area.radius - radii[j])
        centers[j] = hub + rho * np.array([math.cos(theta), math.sin(theta)])

    pad = 1e-7 * area.radius
    for it in range(PACK_ITERATIONS):
        pull = 0.02 * (1.0 - it / PACK_ITERATIONS)
        centers += (hub - centers) * pull
        _separate_circles(centers, radii, area, pad, max_sweeps=1)

    # The force loop has a fixed budget; guarantee the overlap-free invariant
    # with plain separation sweeps, shrinking radii as a last resort.
    for attempt in range(6):
        if _separate_circles(centers, radii, area, pad, _CLEANUP_SWEEPS):
            break
        if attempt == 5:
            raise LayoutError("could not separate documents inside area")
        radii *= 0.98
        logger.warning(
            "area %d: residual overlap after cleanup, radii shrunk", area.area_id
        )

    placed = {
        doc_id: DocumentLayout(
            doc_id=doc_id,
            position=(float(centers[j, 0]), float(centers[j, 1])),
            radius=float(radii[j]),
        )
        for j, (doc_id, _) in enumerate(ordered)
    }
    return [placed[doc_id] for doc_id in sorted(placed)]


def build_layout(
    e: Embedding,
    assignment: ClusterAssignment,
    reader_counts: Mapping[str, int],
    canvas: tuple[float, float] = DEFAULT_CANVAS,
    seed: int = 0,
) -> MapLayout:
    """Full geometry pass: bubbles via place_areas, then per-area packing.

    Per-area document ceilings are chosen so the density precondition always
    holds: doc_r_max <= R * sqrt(0.55 / member count).
    """
    missing = [d for d in assignment.area_of if d not in reader_counts]
    if missing:
        raise ValueError(f"reader counts missing for {len(missing)} documents")

    members = assignment.members()
    readers_by_area = {
        a: sum(reader_counts[d] for d in docs) for a, docs in members.items()
    }
    areas = place_areas(e, assignment, readers_by_area, canvas)

    min_dim = min(canvas)
    documents: list[DocumentLayout] = []
    for area in areas:
        docs = members[area.area_id]
        cap = area.radius * math.sqrt(0.55 / len(docs))
        doc_r_max = min(DOC_R_MAX_OF_AREA * area.radius, cap)
        doc_r_min = min(DOC_R_MIN_FRAC * min_dim, doc_r_max)
        documents.extend(
            pack_documents(
                area,
                [(d, reader_counts[d]) for d in docs],
                seed=seed + area.area_id,
                doc_r_min=doc_r_min,
                doc_r_max=doc_r_max,
            )
        )
    documents.sort(key=lambda d: d.doc_id)
    return MapLayout(canvas=canvas, areas=tuple(areas), documents=tuple(documents))
