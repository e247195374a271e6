"""Shared corpus builders for the test suite."""

from __future__ import annotations

import io
import json

import numpy as np

from readmap.corpus import Corpus, load_corpus

TOPICS = [
    "mobile learning devices",
    "protein folding simulation",
    "social network analysis",
    "quantum error correction",
]


def jsonl(records) -> io.StringIO:
    return io.StringIO("\n".join(json.dumps(r) for r in records))


def doc_record(doc_id: str, **overrides) -> dict:
    record = {
        "doc_id": doc_id,
        "title": f"Title {doc_id}",
        "authors": ["A. Author"],
        "year": 2010,
        "venue": "Journal of Tests",
        "pub_type": "journal_article",
    }
    record.update(overrides)
    return record


def corpus_from(metadata: list[dict], events: list[tuple[str, str]]) -> Corpus:
    event_records = [{"user_id": u, "doc_id": d} for u, d in events]
    return load_corpus(jsonl(metadata), jsonl(event_records))


def random_corpus(seed: int, n_docs: int = 50, n_users: int = 200, p: float = 0.08) -> Corpus:
    rng = np.random.default_rng(seed)
    metadata = [doc_record(f"d{i:03d}") for i in range(n_docs)]
    events = []
    for u in range(n_users):
        for i in range(n_docs):
            if rng.random() < p:
                events.append((f"u{u:04d}", f"d{i:03d}"))
    return corpus_from(metadata, events)


def planted_corpus(
    seed: int,
    communities: int = 4,
    docs_per: int = 20,
    users_per: int = 50,
    p_in: float = 0.5,
    p_out: float = 0.02,
) -> tuple[Corpus, dict[str, int]]:
    """Reader communities with dense in-group and sparse cross-group readership.

    Returns the corpus and the planted community id per doc_id.
    """
    rng = np.random.default_rng(seed)
    metadata = []
    truth: dict[str, int] = {}
    for c in range(communities):
        words = TOPICS[c % len(TOPICS)].split()
        for d in range(docs_per):
            doc_id = f"c{c}d{d:02d}"
            truth[doc_id] = c
            metadata.append(
                doc_record(
                    doc_id,
                    title=f"{words[0].title()} {words[1].title()} study {d}",
                    venue=f"Journal of {words[0].title()}",
                    year=2000 + (d % 12),
                    abstract=f"We study {' '.join(words)} with method {d}.",
                )
            )
    events = []
    for c in range(communities):
        for u in range(users_per):
            user = f"u{c}x{u:03d}"
            for c2 in range(communities):
                p = p_in if c2 == c else p_out
                for d in range(docs_per):
                    if rng.random() < p:
                        events.append((user, f"c{c2}d{d:02d}"))
    return corpus_from(metadata, events), truth
