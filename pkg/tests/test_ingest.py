from __future__ import annotations

import functools
import http.server
import json
import socket
import threading

import pytest

from techlev.exceptions import CorpusError, MissingArtifactError, ParseError, RetryableFetchError
from techlev.ingest import (
    DependencyScope,
    annotate_vulnerabilities,
    classify_dependency_scope,
    count_own_vulns,
    fetch_remote,
    format_timestamp,
    load_corpus,
    load_vuln_db,
    parse_timestamp,
    repository_path,
)
from techlev.model import parse_gav

from conftest import make_instance


def write_manifest(tmp_path, libraries, external=()):
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps({"libraries": list(libraries), "external": list(external)}))
    return path


def lib(gav, own_loc=None, deps=(), released="2020-01-01T00:00:00Z", **extra):
    entry = {"gav": gav, "released": released, "direct_deps": [d if isinstance(d, dict) else {"gav": d} for d in deps]}
    if own_loc is not None:
        entry["own_loc"] = own_loc
    entry.update(extra)
    return entry


SAME_PROJECT = [
    ("org.apache.tomcat", "org.apache.tomcat"),
    ("org.apache.tomcat", "org.apache.tomcat.embed"),
    ("org.apache.tomcat.embed", "org.apache.tomcat"),
    ("com.fasterxml.jackson.core", "com.fasterxml.jackson.core"),
    ("org.springframework", "org.springframework.boot"),
    ("io.netty", "io.netty.incubator"),
    ("org.eclipse.jetty", "org.eclipse.jetty.websocket"),
    ("com.google.guava", "com.google.guava"),
    ("org.ow2.asm", "org.ow2.asm"),
    ("org.hibernate", "org.hibernate.validator"),
]

THIRD_PARTY = [
    ("org.apache.tomcat", "org.apache.commons"),
    ("com.fasterxml.jackson.core", "com.fasterxml.jackson.databind"),
    ("org.slf4j", "org.slf4j2"),
    ("io.netty", "io.nettyx"),
    ("com.google.guava", "com.google.code.findbugs"),
]


@pytest.mark.parametrize("a, b", SAME_PROJECT)
def test_same_project_pairs(a, b):
    assert classify_dependency_scope(parse_gav(f"{a}:x:1"), parse_gav(f"{b}:y:1")) is DependencyScope.OWN_PROJECT


@pytest.mark.parametrize("a, b", THIRD_PARTY)
def test_third_party_pairs(a, b):
    assert classify_dependency_scope(parse_gav(f"{a}:x:1"), parse_gav(f"{b}:y:1")) is DependencyScope.THIRD_PARTY


def test_timestamps():
    ts = parse_timestamp("2018-04-03T12:17:00+02:00")
    assert format_timestamp(ts) == "2018-04-03T10:17:00Z"
    assert format_timestamp(parse_timestamp("2018-04-03T12:17:00")) == "2018-04-03T12:17:00Z"
    with pytest.raises(ParseError):
        parse_timestamp("yesterday")


def test_load_corpus_filters_and_sums(tmp_path):
    manifest = write_manifest(tmp_path, [
        lib("org.a:app:1.0", 5000, deps=["org.b:lib:2.0", {"gav": "org.a.core:core:1.0", "own_loc": 800}]),
        lib("org.a:tiny:1.0", 50),
        lib("org.a:nosrc:1.0"),
        lib("org.a:dangle:1.0", 900, deps=["org.none:ghost:1"]),
    ], external=[{"gav": "org.b:lib:2.0", "own_loc": 1200}])
    corpus = load_corpus(manifest)
    assert [str(i.gav) for i in corpus] == ["org.a:app:1.0"]
    app = corpus.instances[0]
    assert app.dep_loc == 1200  # own-project core is excluded
    assert app.lambda_dir == pytest.approx(0.24)
    reasons = {e.gav: e.reason for e in corpus.exclusions}
    assert reasons == {
        "org.a:tiny:1.0": "below_loc_filter",
        "org.a:nosrc:1.0": "missing_source",
        "org.a:dangle:1.0": "unresolved_dependency",
    }


def test_loc_filter_threshold_is_configurable(tmp_path):
    manifest = write_manifest(tmp_path, [lib("g:a:1", 50)])
    assert len(load_corpus(manifest)) == 0
    assert len(load_corpus(manifest, loc_filter_min=50)) == 1


def test_library_can_be_dependency_of_another(tmp_path):
    manifest = write_manifest(tmp_path, [lib("g:a:1", 400), lib("h:b:1", 200, deps=["g:a:1"])])
    by = load_corpus(manifest).by_gav()
    assert by[parse_gav("h:b:1")].dep_loc == 400


def test_source_path_measured(tmp_path):
    src = tmp_path / "src" / "pkg"
    src.mkdir(parents=True)
    (src / "A.java").write_text("\n".join(f"int a{i};" for i in range(120)) + "\n")
    manifest = write_manifest(tmp_path, [lib("g:a:1", source_path="src")])
    assert load_corpus(manifest).instances[0].own_loc == 120


def test_manifest_errors(tmp_path):
    with pytest.raises(CorpusError):
        load_corpus(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(CorpusError):
        load_corpus(bad)
    with pytest.raises(CorpusError, match="duplicate"):
        load_corpus(write_manifest(tmp_path, [lib("g:a:1", 200), lib("g:a:1", 200)]))
    with pytest.raises(CorpusError):
        load_corpus(write_manifest(tmp_path, [{"gav": "g:a:1"}]))


def test_load_corpus_deterministic_across_jobs(tmp_path):
    for i in range(6):
        d = tmp_path / "src" / f"v{i}"
        d.mkdir(parents=True)
        (d / "X.java").write_text("x();\n" * (100 + 17 * i))
    entries = [lib(f"g:a:1.{i}", source_path=f"src/v{i}", released=f"2020-01-0{i + 1}T00:00:00Z") for i in range(6)]
    manifest = write_manifest(tmp_path, reversed(entries))
    one = load_corpus(manifest, jobs=1)
    many = load_corpus(manifest, jobs=4)
    assert one.instances == many.instances
    assert [i.gav.version_text for i in one] == [f"1.{i}" for i in range(6)]


def test_fetcher_used_when_no_source(tmp_path):
    d = tmp_path / "fetched"
    d.mkdir()
    (d / "Y.java").write_text("y();\n" * 150)
    calls = []

    def fetcher(gav):
        calls.append(str(gav))
        return d

    corpus = load_corpus(write_manifest(tmp_path, [lib("g:a:1")]), fetcher=fetcher)
    assert calls == ["g:a:1"] and corpus.instances[0].own_loc == 150


def write_db(tmp_path, records):
    path = tmp_path / "vulns.json"
    path.write_text(json.dumps(records))
    return path


def test_vuln_db_and_annotation(tmp_path):
    db = load_vuln_db(write_db(tmp_path, [
        {"id": "V1", "coord": "org.y:lib", "affected": ["[1.0,2.0)"]},
        {"id": "V2", "coord": "org.y:lib", "affected": ["(,1.5]", "[3.0]"]},
        {"id": "V3", "coord": "org.x:app", "affected": ["[1.0]"]},
        {"id": "V4", "coord": "org.x.core:core", "affected": ["[0,)"]},
    ]))
    assert count_own_vulns(parse_gav("org.y:lib:1.2"), db) == 2
    assert count_own_vulns(parse_gav("org.y:lib:3.0"), db) == 1
    assert count_own_vulns(parse_gav("org.y:lib:2.0"), db) == 0
    app = make_instance("org.x:app:1.0", deps=["org.y:lib:1.2", "org.y:lib:1.2", "org.x.core:core:1"])
    (out,) = annotate_vulnerabilities([app], db)
    assert (out.own_vulns, out.dep_vulns, out.is_vuln) == (1, 2, True)


def test_vuln_db_errors(tmp_path):
    with pytest.raises(CorpusError, match="duplicate"):
        load_vuln_db(write_db(tmp_path, [{"id": "A", "coord": "g:a", "affected": ["[1]"]}] * 2))
    with pytest.raises(CorpusError):
        load_vuln_db(write_db(tmp_path, [{"id": "A", "coord": "g:a", "affected": ["1.0"]}]))
    with pytest.raises(CorpusError):
        load_vuln_db(write_db(tmp_path, [{"coord": "g:a", "affected": ["[1]"]}]))
    with pytest.raises(CorpusError):
        load_vuln_db(write_db(tmp_path, [{"id": "A", "coord": "g:a:1", "affected": ["[1]"]}]))
    with pytest.raises(CorpusError):
        load_vuln_db(write_db(tmp_path, {"id": "A"}))


def test_repository_path():
    gav = parse_gav("org.slf4j:slf4j-api:1.7.25")
    assert repository_path(gav, "sources") == "org/slf4j/slf4j-api/1.7.25/slf4j-api-1.7.25-sources.jar"
    assert repository_path(gav, extension="pom") == "org/slf4j/slf4j-api/1.7.25/slf4j-api-1.7.25.pom"


class _Handler(http.server.SimpleHTTPRequestHandler):
    hits = []

    def do_GET(self):
        type(self).hits.append(self.path)
        if "/broken/" in self.path:
            self.send_error(500)
            return
        super().do_GET()

    def log_message(self, *args):
        pass


@pytest.fixture
def repo_server(tmp_path):
    root = tmp_path / "repo"
    base = root / "org" / "x" / "lib" / "1.0"
    base.mkdir(parents=True)
    (base / "lib-1.0.pom").write_text("<project/>")
    (base / "lib-1.0-sources.jar").write_bytes(b"PK-fake")
    _Handler.hits = []
    server = http.server.ThreadingHTTPServer(("127.0.0.1", 0), functools.partial(_Handler, directory=str(root)))
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_address[1]}/", _Handler.hits
    server.shutdown()
    server.server_close()


def test_fetch_remote_and_cache(repo_server, tmp_path):
    url, hits = repo_server
    cache = tmp_path / "cache"
    pom, src = fetch_remote("org.x:lib:1.0", url, cache)
    assert pom.read_text() == "<project/>"
    assert src.read_bytes() == b"PK-fake"
    assert src == cache / "org" / "x" / "lib" / "1.0" / "lib-1.0-sources.jar"
    n = len(hits)
    assert fetch_remote(parse_gav("org.x:lib:1.0"), url, cache) == (pom, src)
    assert len(hits) == n


def test_fetch_remote_missing(repo_server, tmp_path):
    url, _ = repo_server
    with pytest.raises(MissingArtifactError):
        fetch_remote("org.x:lib:9.9", url, tmp_path / "cache")
    assert not list((tmp_path / "cache").rglob("*.part"))


def test_fetch_remote_server_error_is_retryable(repo_server, tmp_path):
    url, _ = repo_server
    with pytest.raises(RetryableFetchError):
        fetch_remote("org.x:lib:1.0", url + "broken/", tmp_path / "cache")


def test_fetch_remote_connection_refused(tmp_path):
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        port = s.getsockname()[1]
    with pytest.raises(RetryableFetchError):
        fetch_remote("org.x:lib:1.0", f"http://127.0.0.1:{port}/", tmp_path / "cache", timeout=2)
