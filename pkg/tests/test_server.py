from __future__ import annotations

import concurrent.futures
import io
import json
import threading
from pathlib import Path

import pytest
import requests

from readmap.errors import ReadmapError
from readmap.mapio import SearchQuery, load_map, search, serialize_map
from readmap.server import serve


@pytest.fixture(scope="module")
def map_file(tmp_path_factory, fixture_map):
    path = tmp_path_factory.mktemp("maps") / "map.json"
    path.write_text(serialize_map(fixture_map), encoding="utf-8")
    return path


@pytest.fixture(scope="module")
def static_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("static")
    (root / "index.html").write_text("<!doctype html><title>map</title>", encoding="utf-8")
    (root / "app.js").write_text("export {};", encoding="utf-8")
    (root / "secret.txt").write_text("outside", encoding="utf-8")
    bundle = root / "bundle"
    bundle.mkdir()
    for item in ("index.html", "app.js"):
        (bundle / item).write_text((root / item).read_text(encoding="utf-8"), encoding="utf-8")
    return bundle


@pytest.fixture(scope="module")
def base_url(map_file, static_dir):
    server = serve(map_file, port=0, static_dir=static_dir)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_address[1]}"
    server.shutdown()
    server.server_close()


def test_map_endpoint_is_byte_passthrough(base_url, map_file):
    r = requests.get(f"{base_url}/map")
    assert r.status_code == 200
    assert r.headers["Content-Type"].startswith("application/json")
    assert r.content == map_file.read_bytes()


def test_search_endpoint_matches_library(base_url, fixture_map):
    for q in ("", "simulation", "simulation study", "zzqqxx"):
        r = requests.get(f"{base_url}/search", params={"q": q})
        assert r.status_code == 200
        assert r.json() == search(fixture_map, SearchQuery(q))


def test_search_missing_q_means_empty_query(base_url, fixture_map):
    r = requests.get(f"{base_url}/search")
    assert r.status_code == 200
    assert r.json() == search(fixture_map, SearchQuery(""))


def test_search_rejects_duplicate_q(base_url):
    r = requests.get(f"{base_url}/search?q=a&q=b")
    assert r.status_code == 400
    assert "error" in r.json()


def test_search_rejects_undecodable_bytes(base_url):
    r = requests.get(f"{base_url}/search?q=%ff%fe")
    assert r.status_code == 400
    assert "error" in r.json()


def test_document_endpoint(base_url, map_file):
    with map_file.open(encoding="utf-8") as fh:
        served = load_map(fh)
    doc = served["documents"][0]
    r = requests.get(f"{base_url}/documents/{doc['doc_id']}")
    assert r.status_code == 200
    assert r.json() == doc


def test_document_unknown_is_404(base_url):
    r = requests.get(f"{base_url}/documents/nope")
    assert r.status_code == 404
    assert r.json() == {"error": "unknown document"}


def test_document_nested_path_is_404(base_url):
    r = requests.get(f"{base_url}/documents/a/b")
    assert r.status_code == 404


def test_static_index_and_assets(base_url):
    r = requests.get(f"{base_url}/")
    assert r.status_code == 200
    assert "<title>map</title>" in r.text
    r = requests.get(f"{base_url}/app.js")
    assert r.status_code == 200
    assert r.headers["Content-Type"].startswith(("text/javascript", "application/javascript"))


def test_static_unknown_file_is_404(base_url):
    assert requests.get(f"{base_url}/nothing.css").status_code == 404


def test_static_traversal_is_blocked(base_url):
    # secret.txt sits one level above the served bundle
    r = requests.get(f"{base_url}/%2e%2e/secret.txt")
    assert r.status_code == 404
    r = requests.get(f"{base_url}/..%2fsecret.txt")
    assert r.status_code == 404


def test_concurrent_requests(base_url, fixture_map):
    ids = [d["doc_id"] for d in fixture_map["documents"][:8]]

    def fetch(doc_id):
        return requests.get(f"{base_url}/documents/{doc_id}").json()["doc_id"]

    with concurrent.futures.ThreadPoolExecutor(max_workers=8) as pool:
        assert sorted(pool.map(fetch, ids)) == sorted(ids)


def test_serve_rejects_invalid_map(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("not json at all", encoding="utf-8")
    with pytest.raises(ReadmapError, match="not a valid map file"):
        serve(bad, port=0)
    missing_version = tmp_path / "plain.json"
    missing_version.write_text('{"documents": []}', encoding="utf-8")
    with pytest.raises(ReadmapError):
        serve(missing_version, port=0)
