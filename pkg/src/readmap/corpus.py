"""Corpus ingestion: document metadata, readership events, and statistics.

The input is two newline-delimited JSON streams (one record per line):
document metadata and (user_id, doc_id) readership events. A reader is
counted at most once per document, so events are deduplicated on
(user_id, doc_id).
"""

from __future__ import annotations

import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from datetime import date
from typing import Iterable, Iterator

from .errors import IngestError, ReadmapError
from .util import percent_half_up

logger = logging.getLogger(__name__)

PUB_TYPES = (
    "journal_article",
    "report",
    "book",
    "book_chapter",
    "conference_paper",
)

MIN_YEAR = 1800


@dataclass(frozen=True)
class DocumentRecord:
    """One document with its bibliographic metadata."""

    doc_id: str
    title: str
    authors: tuple[str, ...]
    year: int
    venue: str
    pub_type: str
    abstract: str | None = None
    preview_ref: str | None = None

    def __post_init__(self) -> None:
        if not self.doc_id:
            raise ValueError("doc_id must be non-empty")
        if not self.title:
            raise ValueError("title must be non-empty")
        if self.pub_type not in PUB_TYPES:
            raise ValueError(
                f"unknown pub_type {self.pub_type!r} (expected one of {', '.join(PUB_TYPES)})"
            )
        current_year = date.today().year
        if not MIN_YEAR <= self.year <= current_year:
            raise ValueError(f"year {self.year} outside [{MIN_YEAR}, {current_year}]")


@dataclass(frozen=True)
class ReadershipEvent:
    """One user holding one document in their library."""

    user_id: str
    doc_id: str


@dataclass(frozen=True)
class Provenance:
    source_label: str = ""
    snapshot_date: str | None = None


@dataclass(frozen=True)
class Corpus:
    """Immutable document collection plus deduplicated readership events.

    `documents` is sorted by doc_id; every event resolves to a document.
    """

    documents: tuple[DocumentRecord, ...]
    events: frozenset[ReadershipEvent]
    provenance: Provenance = field(default_factory=Provenance)

    def __len__(self) -> int:
        return len(self.documents)

    def doc_ids(self) -> list[str]:
        return [d.doc_id for d in self.documents]

    def document(self, doc_id: str) -> DocumentRecord:
        for d in self.documents:
            if d.doc_id == doc_id:
                return d
        raise KeyError(doc_id)

    def readers_by_doc(self) -> dict[str, frozenset[str]]:
        """Distinct reader set per document (empty set for unread documents)."""
        readers: dict[str, set[str]] = {d.doc_id: set() for d in self.documents}
        for ev in self.events:
            readers[ev.doc_id].add(ev.user_id)
        return {doc_id: frozenset(users) for doc_id, users in readers.items()}

    def reader_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {d.doc_id: 0 for d in self.documents}
        for ev in self.events:
            counts[ev.doc_id] += 1
        return counts

    def reader_count(self, doc_id: str) -> int:
        if not any(d.doc_id == doc_id for d in self.documents):
            raise KeyError(doc_id)
        return sum(1 for ev in self.events if ev.doc_id == doc_id)

    def total_readers(self) -> int:
        """Sum of per-document distinct reader counts (a user may count for several documents)."""
        return len(self.events)


@dataclass(frozen=True)
class StatsSummary:
    type_histogram: dict[str, int]
    venue_histogram: dict[str, int]
    year_histogram: dict[int, int]
    median_age_years: float
    mean_age_years: float
    share_from_year: tuple[int, float]
    type_shares: dict[str, float]


def _records(stream: Iterable[str], source: str) -> Iterator[tuple[int, dict]]:
    for lineno, line in enumerate(stream, start=1):
        stripped = line.strip()
        if not stripped:
            continue
        try:
            record = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise IngestError(source, lineno, f"malformed record: {exc.msg}") from exc
        if not isinstance(record, dict):
            raise IngestError(source, lineno, "record is not an object")
        yield lineno, record


def _warn_unknown_fields(source: str, lineno: int, record: dict, known: frozenset[str],
                         seen: set[str]) -> None:
    for name in record.keys() - known:
        if name not in seen:
            seen.add(name)
            logger.warning("%s line %d: ignoring unknown field %r", source, lineno, name)


_DOC_REQUIRED = frozenset({"doc_id", "title", "authors", "year", "venue", "pub_type"})
_DOC_KNOWN = _DOC_REQUIRED | {"abstract", "preview_ref"}
_EVENT_REQUIRED = frozenset({"user_id", "doc_id"})


def _parse_document(source: str, lineno: int, record: dict) -> DocumentRecord:
    missing = _DOC_REQUIRED - record.keys()
    if missing:
        raise IngestError(source, lineno, f"missing field(s): {', '.join(sorted(missing))}")
    authors = record["authors"]
    if not isinstance(authors, list) or not all(isinstance(a, str) for a in authors):
        raise IngestError(source, lineno, "authors must be an array of strings")
    if not isinstance(record["year"], int) or isinstance(record["year"], bool):
        raise IngestError(source, lineno, "year must be an integer")
    for name in ("doc_id", "title", "venue", "pub_type"):
        if not isinstance(record[name], str):
            raise IngestError(source, lineno, f"{name} must be a string")
    for name in ("abstract", "preview_ref"):
        if record.get(name) is not None and not isinstance(record[name], str):
            raise IngestError(source, lineno, f"{name} must be a string when present")
    try:
        return DocumentRecord(
            doc_id=record["doc_id"],
            title=record["title"],
            authors=tuple(authors),
            year=record["year"],
            venue=record["venue"],
            pub_type=record["pub_type"],
            abstract=record.get("abstract"),
            preview_ref=record.get("preview_ref"),
        )
    except ValueError as exc:
        raise IngestError(source, lineno, str(exc)) from exc


def load_corpus(
    metadata_stream: Iterable[str],
    events_stream: Iterable[str],
    provenance: Provenance | None = None,
) -> Corpus:
    """Parse and validate the two record streams into a Corpus.

    Duplicate (user_id, doc_id) events collapse to one; an event whose
    doc_id has no metadata record is an error, as is a duplicate doc_id.
    """
    unknown_seen: set[str] = set()
    documents: dict[str, DocumentRecord] = {}
    for lineno, record in _records(metadata_stream, "metadata"):
        _warn_unknown_fields("metadata", lineno, record, _DOC_KNOWN, unknown_seen)
        doc = _parse_document("metadata", lineno, record)
        if doc.doc_id in documents:
            raise IngestError("metadata", lineno, f"duplicate doc_id {doc.doc_id!r}")
        documents[doc.doc_id] = doc

    events: set[ReadershipEvent] = set()
    for lineno, record in _records(events_stream, "events"):
        _warn_unknown_fields("events", lineno, record, _EVENT_REQUIRED, unknown_seen)
        missing = _EVENT_REQUIRED - record.keys()
        if missing:
            raise IngestError("events", lineno, f"missing field(s): {', '.join(sorted(missing))}")
        user_id, doc_id = record["user_id"], record["doc_id"]
        if not isinstance(user_id, str) or not isinstance(doc_id, str) or not user_id or not doc_id:
            raise IngestError("events", lineno, "user_id and doc_id must be non-empty strings")
        if doc_id not in documents:
            raise IngestError("events", lineno, f"dangling doc_id {doc_id!r}")
        events.add(ReadershipEvent(user_id=user_id, doc_id=doc_id))

    ordered = tuple(documents[doc_id] for doc_id in sorted(documents))
    return Corpus(documents=ordered, events=frozenset(events),
                  provenance=provenance or Provenance())


def filter_by_threshold(corpus: Corpus, min_readers: int) -> Corpus:
    """Keep exactly the documents with at least `min_readers` distinct readers."""
    if min_readers < 0:
        raise ValueError("min_readers must be non-negative")
    counts = corpus.reader_counts()
    kept = tuple(d for d in corpus.documents if counts[d.doc_id] >= min_readers)
    kept_ids = {d.doc_id for d in kept}
    events = frozenset(ev for ev in corpus.events if ev.doc_id in kept_ids)
    return Corpus(documents=kept, events=events, provenance=corpus.provenance)


def publication_stats(corpus: Corpus, reference_date: date) -> StatsSummary:
    """Histograms and age statistics for the corpus at a reference date.

    Ages are whole years (reference year minus publication year); the
    median of an even count is the mean of the two central values, and
    percentage shares round half-up to integers.
    """
    if not corpus.documents:
        raise ReadmapError("cannot compute statistics of an empty corpus")
    ref_year = reference_date.year
    for d in corpus.documents:
        if d.year > ref_year:
            raise ValueError(
                f"document {d.doc_id!r} has year {d.year} after reference year {ref_year}"
            )

    n = len(corpus.documents)
    type_counts = Counter(d.pub_type for d in corpus.documents)
    venue_counts = Counter(d.venue for d in corpus.documents)
    year_counts = Counter(d.year for d in corpus.documents)

    ages = sorted(ref_year - d.year for d in corpus.documents)
    mid = n // 2
    if n % 2 == 0:
        median_age = (ages[mid - 1] + ages[mid]) / 2.0
    else:
        median_age = float(ages[mid])
    mean_age = sum(ages) / n

    from_year = ref_year - 9
    recent = sum(1 for d in corpus.documents if d.year >= from_year)

    return StatsSummary(
        type_histogram={t: type_counts.get(t, 0) for t in PUB_TYPES},
        venue_histogram={v: venue_counts[v] for v in sorted(venue_counts)},
        year_histogram={y: year_counts[y] for y in sorted(year_counts)},
        median_age_years=median_age,
        mean_age_years=mean_age,
        share_from_year=(from_year, percent_half_up(recent, n)),
        type_shares={t: percent_half_up(type_counts.get(t, 0), n) for t in PUB_TYPES},
    )
