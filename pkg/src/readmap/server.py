"""Read-only HTTP surface over an exported map file.

GET /map returns the file bytes verbatim; /search and /documents/{id} answer
from the parsed document. The map is immutable, so concurrent reads need no
locking. A static directory (the bundled explorer, when present) is served
for all other paths.
"""

from __future__ import annotations

import logging
import mimetypes
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, unquote, urlsplit

from .errors import ReadmapError
from .mapio import SearchQuery, load_map, search, serialize_json

__all__ = ["MapServer", "serve", "default_static_dir"]

logger = logging.getLogger(__name__)


def default_static_dir() -> Path | None:
    candidate = Path(__file__).parent / "static"
    return candidate if candidate.is_dir() else None


class MapServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(
        self,
        address: tuple[str, int],
        map_bytes: bytes,
        document: dict,
        static_dir: Path | None = None,
    ) -> None:
        super().__init__(address, _Handler)
        self.map_bytes = map_bytes
        self.document = document
        self.docs_by_id = {d["doc_id"]: d for d in document["documents"]}
        self.static_dir = static_dir


class _Handler(BaseHTTPRequestHandler):
    server: MapServer

    def log_message(self, format: str, *args) -> None:  # quiet by default
        logger.debug("%s %s", self.address_string(), format % args)

    def _reply(self, status: int, body: bytes, content_type: str) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _reply_json(self, status: int, payload: object) -> None:
        body = serialize_json(payload)
        self._reply(status, body.encode("utf-8"), "application/json; charset=utf-8")

    def do_GET(self) -> None:
        parts = urlsplit(self.path)
        path = parts.path

        if path == "/map":
            self._reply(200, self.server.map_bytes, "application/json; charset=utf-8")
            return

        if path == "/search":
            try:
                params = parse_qs(
                    parts.query, keep_blank_values=True, errors="strict"
                )
            except UnicodeDecodeError:
                self._reply_json(400, {"error": "malformed query"})
                return
            values = params.get("q", [""])
            if len(values) != 1:
                self._reply_json(400, {"error": "malformed query"})
                return
            ids = search(self.server.document, SearchQuery(raw=values[0]))
            self._reply_json(200, ids)
            return

        if path.startswith("/documents/"):
            doc_id = unquote(path[len("/documents/") :])
            doc = self.server.docs_by_id.get(doc_id) if "/" not in doc_id else None
            if doc is None:
                self._reply_json(404, {"error": "unknown document"})
            else:
                self._reply_json(200, doc)
            return

        self._serve_static(path)

    def _serve_static(self, path: str) -> None:
        root = self.server.static_dir
        if root is None:
            self._reply_json(404, {"error": "not found"})
            return
        relative = unquote(path.lstrip("/")) or "index.html"
        candidate = (root / relative).resolve()
        # refuse anything that escapes the static root
        if root.resolve() not in candidate.parents or not candidate.is_file():
            self._reply_json(404, {"error": "not found"})
            return
        content_type = mimetypes.guess_type(candidate.name)[0] or "application/octet-stream"
        self._reply(200, candidate.read_bytes(), content_type)


def serve(
    map_path: str | Path,
    port: int,
    host: str = "127.0.0.1",
    static_dir: Path | None = None,
) -> MapServer:
    """Build a server for an exported map file; caller runs serve_forever()."""
    map_path = Path(map_path)
    raw = map_path.read_bytes()
    try:
        with map_path.open(encoding="utf-8") as fh:
            document = load_map(fh)
    except ValueError as exc:
        raise ReadmapError(f"{map_path}: not a valid map file") from exc
    if static_dir is None:
        static_dir = default_static_dir()
    return MapServer((host, port), raw, document, static_dir=static_dir)
