"""Command-line interface: build a map file, serve it, or summarize a corpus."""

from __future__ import annotations

import argparse
import sys
from datetime import date
from pathlib import Path

from .cluster import cut, select_k, ward_cluster
from .cooccur import build_cooccurrence, normalize, to_distance
from .corpus import Provenance, filter_by_threshold, load_corpus, publication_stats
from .embed import EmbeddingConfig, mds_embed
from .errors import ReadmapError
from .labeler import label_areas
from .layout import build_layout
from .mapio import export_map, make_provenance, serialize_map
from .server import serve

__all__ = ["main"]

# user-facing scheme names to internal ones
_SIMILARITY = {"cosine": "cosine", "jaccard": "jaccard", "raw": "raw_scaled"}

AUTO_K_MAX = 25


def _k_value(text: str) -> str | int:
    if text == "auto":
        return "auto"
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("k must be 'auto' or a positive integer")
    if value < 1:
        raise argparse.ArgumentTypeError("k must be positive")
    return value


def _iso_date(text: str) -> date:
    try:
        return date.fromisoformat(text)
    except ValueError:
        raise argparse.ArgumentTypeError("date must be YYYY-MM-DD")


def _make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="readmap",
        description="Turn co-readership data into an interactive knowledge-domain map.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    build = sub.add_parser("build", help="compute a map file from corpus data")
    build.add_argument("--metadata", required=True, help="document metadata (JSONL)")
    build.add_argument("--events", required=True, help="readership events (JSONL)")
    build.add_argument("--threshold", type=int, default=16,
                       help="minimum distinct readers per document (default 16)")
    build.add_argument("--similarity", choices=sorted(_SIMILARITY), default="cosine")
    build.add_argument("--k", type=_k_value, default="auto",
                       help="area count, or 'auto' for silhouette selection")
    build.add_argument("--seed", type=int, default=0)
    build.add_argument("--out", required=True, help="output map file")
    build.add_argument("--snapshot-date", default=None,
                       help="data snapshot date recorded in provenance (YYYY-MM-DD)")
    build.set_defaults(func=_cmd_build)

    serve_p = sub.add_parser("serve", help="serve a map file over HTTP")
    serve_p.add_argument("--map", required=True, help="map file from 'build'")
    serve_p.add_argument("--port", type=int, default=8080)
    serve_p.set_defaults(func=_cmd_serve)

    stats = sub.add_parser("stats", help="print corpus summary statistics")
    stats.add_argument("--metadata", required=True)
    stats.add_argument("--events", required=True)
    stats.add_argument("--date", type=_iso_date, required=True,
                       help="reference date for age statistics (YYYY-MM-DD)")
    stats.set_defaults(func=_cmd_stats)
    return parser


def _load(metadata_path: str, events_path: str, snapshot_date: str | None = None):
    provenance = Provenance(source_label=metadata_path, snapshot_date=snapshot_date)
    with open(metadata_path, encoding="utf-8") as metadata:
        with open(events_path, encoding="utf-8") as events:
            return load_corpus(metadata, events, provenance=provenance)


def _cmd_build(args: argparse.Namespace) -> int:
    corpus = _load(args.metadata, args.events, args.snapshot_date)
    kept = filter_by_threshold(corpus, args.threshold)
    if not kept.documents:
        raise ReadmapError(f"no documents have at least {args.threshold} readers")

    scheme = _SIMILARITY[args.similarity]
    distances = to_distance(normalize(build_cooccurrence(kept), scheme=scheme))
    embedding, _trace = mds_embed(distances, EmbeddingConfig(seed=args.seed))
    dendrogram = ward_cluster(embedding)

    n = len(kept.documents)
    if args.k == "auto":
        k = 1 if n < 3 else select_k(dendrogram, embedding, 2, min(AUTO_K_MAX, n - 1))
    else:
        k = args.k
        if k > n:
            raise ReadmapError(f"k={k} exceeds the {n} documents above threshold")

    counts = kept.reader_counts()
    assignment = cut(dendrogram, k, reader_counts=counts)
    names = label_areas(kept, assignment)
    layout = build_layout(embedding, assignment, counts, seed=args.seed)
    provenance = make_provenance(
        threshold=args.threshold,
        similarity=scheme,
        seed=args.seed,
        k=k,
        snapshot_date=args.snapshot_date,
    )
    document = export_map(kept, assignment, names, layout, provenance)
    Path(args.out).write_text(serialize_map(document), encoding="utf-8")
    print(f"wrote {args.out}: {k} areas, {n} documents")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    server = serve(args.map, args.port)
    host, port = server.server_address[:2]
    print(f"serving {args.map} on http://{host}:{port}/ (Ctrl+C to stop)")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


def _cmd_stats(args: argparse.Namespace) -> int:
    corpus = _load(args.metadata, args.events)
    summary = publication_stats(corpus, args.date)
    print(f"documents: {len(corpus.documents)}")
    print(f"readership events: {corpus.total_readers()}")
    print("publication types:")
    for pub_type, count in summary.type_histogram.items():
        share = summary.type_shares[pub_type]
        print(f"  {pub_type}: {count} ({share:g}%)")
    print(f"median age: {summary.median_age_years:.1f} years")
    print(f"mean age: {summary.mean_age_years:.1f} years")
    year, share = summary.share_from_year
    print(f"published from {year} onward: {share:g}%")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ReadmapError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
