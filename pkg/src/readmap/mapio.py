"""Map assembly, canonical serialization, and search/sort semantics.

The exported file is deterministic: fixed key order, floats at 6 significant
digits, documents sorted by doc_id and areas by area_id, so identical inputs
give byte-identical bytes.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from typing import IO, Any, Mapping, Sequence

from . import __version__
from .cluster import ClusterAssignment
from .corpus import Corpus
from .errors import ReadmapError
from .labeler import AreaName
from .layout import MapLayout
from .util import percent_half_up

__all__ = [
    "SCHEMA_VERSION",
    "KnowledgeMap",
    "SearchQuery",
    "readership_share",
    "export_map",
    "serialize_map",
    "serialize_json",
    "load_map",
    "search",
    "sort_documents",
    "make_provenance",
]

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

SORT_KEYS = ("title", "area", "readers")

# Parsed map document; plain dicts so loaded and freshly built maps are
# interchangeable everywhere downstream.
KnowledgeMap = dict[str, Any]


@dataclass(frozen=True)
class SearchQuery:
    raw: str

    @property
    def terms(self) -> tuple[str, ...]:
        return tuple(self.raw.lower().split())


def readership_share(area_readers: int, total_readers: int) -> float:
    """Percent of total readership, one decimal, half-up."""
    if total_readers <= 0:
        raise ValueError("total_readers must be positive")
    if not 0 <= area_readers <= total_readers:
        raise ValueError("area_readers must be in [0, total_readers]")
    return percent_half_up(area_readers, total_readers, decimals=1)


def make_provenance(
    threshold: int,
    similarity: str,
    seed: int,
    k: int,
    snapshot_date: str | None = None,
) -> dict[str, Any]:
    return {
        "snapshot_date": snapshot_date,
        "threshold": threshold,
        "similarity": similarity,
        "seed": seed,
        "k": k,
        "tool_version": __version__,
    }


_PROVENANCE_KEYS = ("snapshot_date", "threshold", "similarity", "seed", "k", "tool_version")


def export_map(
    corpus: Corpus,
    assignment: ClusterAssignment,
    names: Sequence[AreaName],
    layout: MapLayout,
    provenance: Mapping[str, Any],
) -> KnowledgeMap:
    """Assemble the final map document from consistent pipeline outputs."""
    if not corpus.documents:
        raise ReadmapError("cannot export an empty corpus")
    corpus_ids = set(corpus.doc_ids())
    if set(assignment.area_of) != corpus_ids:
        raise ReadmapError("assignment and corpus cover different documents")
    if {d.doc_id for d in layout.documents} != corpus_ids:
        raise ReadmapError("layout and corpus cover different documents")
    area_ids = sorted(set(assignment.area_of.values()))
    if sorted(n.area_id for n in names) != area_ids:
        raise ReadmapError("names and assignment cover different areas")
    if sorted(a.area_id for a in layout.areas) != area_ids:
        raise ReadmapError("layout and assignment cover different areas")

    counts = corpus.reader_counts()
    total = sum(counts.values())
    combined = {a: 0 for a in area_ids}
    for doc_id, area in assignment.area_of.items():
        combined[area] += counts[doc_id]
    for area in layout.areas:
        if area.combined_readers != combined[area.area_id]:
            raise ReadmapError(
                f"layout readership for area {area.area_id} disagrees with corpus"
            )

    label_of = {n.area_id: n.label for n in names}
    shares = {
        a: readership_share(combined[a], total) if total > 0 else 0.0 for a in area_ids
    }
    share_sum = sum(shares.values())
    if total > 0 and abs(share_sum - 100.0) > 0.2:
        logger.warning("rounded shares sum to %.1f, outside 100.0 +/- 0.2", share_sum)

    areas = [
        {
            "area_id": area.area_id,
            "label": label_of[area.area_id],
            "center": [area.center[0], area.center[1]],
            "radius": area.radius,
            "combined_readers": area.combined_readers,
            "readership_share_percent": shares[area.area_id],
        }
        for area in sorted(layout.areas, key=lambda a: a.area_id)
    ]

    docs_by_id = {d.doc_id: d for d in corpus.documents}
    documents = []
    for placed in sorted(layout.documents, key=lambda d: d.doc_id):
        rec = docs_by_id[placed.doc_id]
        entry: dict[str, Any] = {
            "doc_id": rec.doc_id,
            "area_id": assignment.area_of[rec.doc_id],
            "position": [placed.position[0], placed.position[1]],
            "radius": placed.radius,
            "title": rec.title,
            "authors": list(rec.authors),
            "year": rec.year,
            "venue": rec.venue,
            "pub_type": rec.pub_type,
            "readers": counts[rec.doc_id],
        }
        if rec.abstract is not None:
            entry["abstract"] = rec.abstract
        if rec.preview_ref is not None:
            entry["preview_ref"] = rec.preview_ref
        documents.append(entry)

    return {
        "schema_version": SCHEMA_VERSION,
        "provenance": {key: provenance.get(key) for key in _PROVENANCE_KEYS},
        "canvas": [layout.canvas[0], layout.canvas[1]],
        "areas": areas,
        "documents": documents,
    }


def _format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError("cannot serialize non-finite float")
    text = f"{x:.6g}"
    return "0" if text == "-0" else text


def _emit(value: Any, out: list[str], indent: int) -> None:
    pad = "  " * indent
    if value is None:
        out.append("null")
    elif value is True or value is False:
        out.append("true" if value else "false")
    elif isinstance(value, int):
        out.append(str(value))
    elif isinstance(value, float):
        out.append(_format_float(value))
    elif isinstance(value, str):
        out.append(json.dumps(value, ensure_ascii=False))
    elif isinstance(value, Mapping):
        if not value:
            out.append("{}")
            return
        out.append("{\n")
        for i, (key, item) in enumerate(value.items()):
            out.append(f'{pad}  {json.dumps(str(key), ensure_ascii=False)}: ')
            _emit(item, out, indent + 1)
            out.append(",\n" if i < len(value) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(value, (list, tuple)):
        if not value:
            out.append("[]")
            return
        out.append("[\n")
        for i, item in enumerate(value):
            out.append(pad + "  ")
            _emit(item, out, indent + 1)
            out.append(",\n" if i < len(value) - 1 else "\n")
        out.append(pad + "]")
    else:
        raise TypeError(f"cannot serialize {type(value).__name__}")


def serialize_json(value: Any) -> str:
    """Canonical text form of any map-shaped value; ends with a newline."""
    out: list[str] = []
    _emit(value, out, 0)
    out.append("\n")
    return "".join(out)


def serialize_map(document: Mapping[str, Any]) -> str:
    return serialize_json(document)


def load_map(stream: IO[str]) -> KnowledgeMap:
    document = json.load(stream)
    if not isinstance(document, dict) or "schema_version" not in document:
        raise ReadmapError("not a map file: missing schema_version")
    return document


def _searchable_text(doc: Mapping[str, Any]) -> str:
    parts = [
        doc["title"],
        " ".join(doc["authors"]),
        doc["venue"],
        str(doc["year"]),
        doc.get("abstract") or "",
    ]
    return " ".join(parts).lower()


def search(document: KnowledgeMap, query: SearchQuery | str) -> list[str]:
    """doc_ids whose text contains every term, best-read first.

    Every term must appear as a case-insensitive substring of the document's
    combined title/authors/venue/year/abstract. Zero terms match everything.
    Order: descending readers, then ascending doc_id.
    """
    if isinstance(query, str):
        query = SearchQuery(raw=query)
    terms = query.terms
    hits = [
        doc
        for doc in document["documents"]
        if all(term in _searchable_text(doc) for term in terms)
    ]
    hits.sort(key=lambda d: (-d["readers"], d["doc_id"]))
    return [d["doc_id"] for d in hits]


def sort_documents(document: KnowledgeMap, key: str) -> list[str]:
    """Stable orderings for the list view.

    title: case-insensitive ascending; area: area_id ascending then readers
    descending; readers: descending with doc_id ascending ties.
    """
    docs = list(document["documents"])
    if key == "title":
        docs.sort(key=lambda d: d["title"].lower())
    elif key == "area":
        docs.sort(key=lambda d: (d["area_id"], -d["readers"]))
    elif key == "readers":
        docs.sort(key=lambda d: (-d["readers"], d["doc_id"]))
    else:
        raise ValueError(f"sort key must be one of {', '.join(SORT_KEYS)}")
    return [d["doc_id"] for d in docs]
