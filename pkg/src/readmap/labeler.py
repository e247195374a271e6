"""Area naming from member document text, with optional external enrichment.

The default path is deterministic TF-IDF over area pseudo-documents; an
enrichment client can contribute candidate labels, and a manual override map
has the final word.
"""

from __future__ import annotations

import abc
import json
import logging
import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import IO, Mapping, Sequence

import requests

from .cluster import ClusterAssignment
from .corpus import Corpus, DocumentRecord
from .errors import ReadmapError
from .stopwords import STOPWORDS

__all__ = [
    "TermScore",
    "AreaName",
    "EnrichmentClient",
    "HttpEnrichmentClient",
    "label_areas",
    "enrich_labels",
    "load_overrides",
]

logger = logging.getLogger(__name__)

LABEL_SOURCES = ("tfidf", "enrichment", "manual_override")

# Two-word phrases carry more meaning than either word alone; weight them up
# so "mobile learning" can outrank its constituents.
_BIGRAM_WEIGHT = 2.0
_MAX_LABEL_TERMS = 3

_TOKEN_RE = re.compile(r"[a-z0-9]+")


@dataclass(frozen=True)
class TermScore:
    term: str
    score: float

    def __post_init__(self) -> None:
        if not self.term:
            raise ValueError("term must be non-empty")
        if self.term in STOPWORDS:
            raise ValueError(f"term {self.term!r} is a stopword")
        if not math.isfinite(self.score) or self.score < 0:
            raise ValueError("score must be finite and non-negative")


@dataclass(frozen=True)
class AreaName:
    area_id: int
    label: str
    source: str

    def __post_init__(self) -> None:
        if not self.label:
            raise ValueError("label must be non-empty")
        if self.source not in LABEL_SOURCES:
            raise ValueError(f"unknown label source {self.source!r}")


class EnrichmentClient(abc.ABC):
    """External suggestion source: document texts in, labeled candidates out.

    Implementations must be pure request/response and honor a timeout;
    errors raise, they never hang.
    """

    @abc.abstractmethod
    def suggest(self, texts: Sequence[str]) -> list[tuple[str, float]]:
        """Return (label, confidence) candidates for the given texts."""


class HttpEnrichmentClient(EnrichmentClient):
    """Reference adapter: POSTs texts as JSON, expects [{label, confidence}]."""

    def __init__(self, endpoint: str, timeout: float = 5.0) -> None:
        self.endpoint = endpoint
        self.timeout = timeout

    def suggest(self, texts: Sequence[str]) -> list[tuple[str, float]]:
        response = requests.post(
            self.endpoint, json={"texts": list(texts)}, timeout=self.timeout
        )
        response.raise_for_status()
        payload = response.json()
        return [(str(item["label"]), float(item["confidence"])) for item in payload]


def _tokens(text: str) -> list[str]:
    # Lowercase, split on anything non-alphanumeric, drop stopwords,
    # single letters, and bare numbers (years in titles are noise).
    out = []
    for tok in _TOKEN_RE.findall(text.lower()):
        if len(tok) < 2 or tok.isdigit() or tok in STOPWORDS:
            continue
        out.append(tok)
    return out


def _term_counts(docs: Sequence[DocumentRecord]) -> Counter[str]:
    counts: Counter[str] = Counter()
    for doc in docs:
        fields = [doc.title] + ([doc.abstract] if doc.abstract else [])
        for text in fields:
            toks = _tokens(text)
            counts.update(toks)
            counts.update(f"{a} {b}" for a, b in zip(toks, toks[1:]))
    return counts


def _candidates(
    counts: Counter[str], df: Mapping[str, int], n_areas: int
) -> list[TermScore]:
    scored = []
    for term, tf in counts.items():
        idf = math.log((1 + n_areas) / (1 + df[term])) + 1.0
        weight = _BIGRAM_WEIGHT if " " in term else 1.0
        scored.append(TermScore(term=term, score=tf * weight * idf))
    scored.sort(key=lambda ts: (-ts.score, ts.term))
    return scored


def _compose_label(candidates: Sequence[TermScore]) -> tuple[str, list[str]]:
    # Greedy pick of top-scoring terms whose words don't repeat what's
    # already chosen, so a strong bigram suppresses its constituents.
    chosen: list[str] = []
    covered: set[str] = set()
    for cand in candidates:
        words = cand.term.split()
        if any(w in covered for w in words):
            continue
        chosen.append(cand.term)
        covered.update(words)
        if len(chosen) == _MAX_LABEL_TERMS:
            break
    return " ".join(t.title() for t in chosen), chosen


def label_areas(
    corpus: Corpus,
    assignment: ClusterAssignment,
    overrides: Mapping[int, str] | None = None,
) -> tuple[AreaName, ...]:
    """Name every area; deterministic given corpus and assignment.

    Terms (unigrams and bigrams from titles and abstracts) are scored by
    TF-IDF where each area's concatenated text is one pseudo-document. A
    label is the top terms joined title-cased; colliding labels take their
    next-ranked term until unique. Areas without usable tokens fall back to
    "Area <index>". Overrides replace computed names verbatim.
    """
    overrides = dict(overrides or {})
    docs_by_id = {d.doc_id: d for d in corpus.documents}
    members = assignment.members()
    unknown = set(overrides) - set(members)
    if unknown:
        raise ReadmapError(f"override for unknown area(s): {sorted(unknown)}")

    counts_by_area = {
        a: _term_counts([docs_by_id[d] for d in docs]) for a, docs in members.items()
    }
    df: Counter[str] = Counter()
    for counts in counts_by_area.values():
        df.update(counts.keys())

    used: dict[str, int] = {}
    for a, label in overrides.items():
        if label in used:
            raise ReadmapError(f"duplicate override label {label!r}")
        used[label] = a

    names: dict[int, AreaName] = {
        a: AreaName(area_id=a, label=label, source="manual_override")
        for a, label in overrides.items()
    }
    for a in sorted(members):
        if a in names:
            continue
        candidates = _candidates(counts_by_area[a], df, n_areas=assignment.k)
        label, chosen = _compose_label(candidates)
        if label:
            ranked = [c.term for c in candidates if c.term not in chosen]
            while label in used and ranked:
                chosen.append(ranked.pop(0))
                label = " ".join(t.title() for t in chosen)
        if not label or label in used:
            label = f"Area {a}"
            names[a] = AreaName(area_id=a, label=label, source="manual_override")
        else:
            names[a] = AreaName(area_id=a, label=label, source="tfidf")
        if label in used:
            raise ReadmapError(f"could not make label for area {a} unique")
        used[label] = a
    return tuple(names[a] for a in sorted(names))


def enrich_labels(
    area_docs: Sequence[DocumentRecord],
    client: EnrichmentClient,
) -> list[TermScore]:
    """Merge external label candidates with the area's own TF candidates.

    Local scores are term frequencies normalized to [0, 1] so client
    confidences live on the same axis; the merge keeps the max per term.
    Client failures degrade to the local candidates with a warning.
    """
    counts = _term_counts(area_docs)
    top = max(
        (tf * (_BIGRAM_WEIGHT if " " in t else 1.0) for t, tf in counts.items()),
        default=0.0,
    )
    merged: dict[str, float] = {}
    for term, tf in counts.items():
        weight = _BIGRAM_WEIGHT if " " in term else 1.0
        merged[term] = tf * weight / top if top > 0 else 0.0

    texts = [d.title if not d.abstract else f"{d.title}\n{d.abstract}" for d in area_docs]
    try:
        suggestions = client.suggest(texts)
    except Exception as exc:  # degrade, never fail the pipeline on I/O
        logger.warning("enrichment client failed, keeping local candidates: %r", exc)
        suggestions = []
    for raw_label, confidence in suggestions:
        term = raw_label.strip().lower()
        if not term or term in STOPWORDS:
            continue
        merged[term] = max(merged.get(term, 0.0), float(confidence))

    out = [TermScore(term=t, score=s) for t, s in merged.items()]
    out.sort(key=lambda ts: (-ts.score, ts.term))
    return out


def load_overrides(stream: IO[str]) -> dict[int, str]:
    """Read a JSON object mapping area id to label."""
    raw = json.load(stream)
    if not isinstance(raw, dict):
        raise ReadmapError("override file must be a JSON object")
    out: dict[int, str] = {}
    for key, value in raw.items():
        try:
            area = int(key)
        except ValueError as exc:
            raise ReadmapError(f"override key {key!r} is not an area id") from exc
        if not isinstance(value, str) or not value:
            raise ReadmapError(f"override label for area {area} must be a non-empty string")
        out[area] = value
    return out
