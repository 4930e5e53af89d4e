"""Corpus manifests, vulnerability databases and the remote artifact fetcher.

Manifest layout (JSON)::

    {
      "libraries": [
        {"gav": "g:a:1.0", "released": "2016-03-01T10:00:00Z",
         "source_path": "src/a-1.0",            # or "own_loc": 5000
         "direct_deps": [{"gav": "x:y:2.1", "scope": "compile"}]}
      ],
      "external": [{"gav": "x:y:2.1", "own_loc": 20000}]
    }

``source_path`` is resolved against the manifest's directory and may be
a directory or a ``-sources.jar``/zip archive. A dependency may also be
marked external inline by carrying its own ``own_loc``.
"""

from __future__ import annotations

import enum
import json
import logging
import os
import threading
import urllib.error
import urllib.request
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .exceptions import (
    CorpusError,
    MissingArtifactError,
    ParseError,
    RetryableFetchError,
    UnresolvedDependencyError,
)
from .loc import JAVA, LanguageProfile, count_library_loc, sum_direct_dep_loc
from .model import (
    Coordinate,
    LibraryInstance,
    VersionRange,
    VersionedCoordinate,
    parse_ga,
    parse_gav,
)

log = logging.getLogger(__name__)

DEFAULT_LOC_FILTER_MIN = 100


class DependencyScope(enum.Enum):
    OWN_PROJECT = "own_project"
    THIRD_PARTY = "third_party"


def _same_project(a: str, b: str) -> bool:
    return a == b or b.startswith(a + ".") or a.startswith(b + ".")


def classify_dependency_scope(dependent, dep) -> DependencyScope:
    """Own-project when the groups are equal or one extends the other by
    dotted segments (``org.x`` and ``org.x.plugins``)."""
    if _same_project(dependent.group, dep.group):
        return DependencyScope.OWN_PROJECT
    return DependencyScope.THIRD_PARTY


def parse_timestamp(text: str) -> datetime:
    """ISO-8601 to an aware UTC datetime; naive input is taken as UTC."""
    try:
        ts = datetime.fromisoformat(text.strip().replace("Z", "+00:00"))
    except (AttributeError, ValueError) as exc:
        raise ParseError(f"bad timestamp {text!r}") from exc
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def format_timestamp(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass(frozen=True)
class Exclusion:
    gav: str
    reason: str
    detail: str = ""


@dataclass(frozen=True)
class _Node:
    own_loc: int
    direct_deps: Tuple[VersionedCoordinate, ...] = ()


@dataclass
class Corpus:
    """A resolved corpus: kept instances (sorted by GAV) and exclusion records."""

    instances: List[LibraryInstance]
    exclusions: List[Exclusion]

    def __iter__(self):
        return iter(self.instances)

    def __len__(self):
        return len(self.instances)

    def by_gav(self) -> Dict[VersionedCoordinate, LibraryInstance]:
        return {i.gav: i for i in self.instances}


def _read_json(path, what):
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError as exc:
        raise CorpusError(f"{what} not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise CorpusError(f"{what} {path} is not valid JSON: {exc}") from exc


def load_corpus(
    manifest_path,
    profile: LanguageProfile = JAVA,
    loc_filter_min: int = DEFAULT_LOC_FILTER_MIN,
    jobs: int = 1,
    transitive: bool = False,
    fetcher=None,
) -> Corpus:
    """Resolve a manifest into measured :class:`LibraryInstance` objects.

    ``fetcher``, if given, is called as ``fetcher(gav)`` for libraries
    without ``source_path`` or ``own_loc`` and must return the path of a
    source archive (see :func:`fetch_remote`).
    """
    manifest_path = Path(manifest_path)
    data = _read_json(manifest_path, "manifest")
    if not isinstance(data, dict) or not isinstance(data.get("libraries"), list):
        raise CorpusError(f"manifest {manifest_path} must be an object with a 'libraries' list")
    base = manifest_path.parent

    exclusions: List[Exclusion] = []
    entries = []
    seen = set()
    for raw in data["libraries"]:
        try:
            gav = parse_gav(raw["gav"])
            released = parse_timestamp(raw["released"])
            deps = tuple(parse_gav(d["gav"]) for d in raw.get("direct_deps", []))
        except (KeyError, TypeError, ParseError) as exc:
            raise CorpusError(f"bad manifest entry {raw!r}: {exc}") from exc
        if gav in seen:
            raise CorpusError(f"duplicate gav {gav} in manifest")
        seen.add(gav)
        entries.append((gav, released, deps, raw))

    def measure(entry) -> Tuple[Optional[int], str]:
        gav, _, _, raw = entry
        if raw.get("own_loc") is not None:
            return int(raw["own_loc"]), ""
        try:
            if raw.get("source_path"):
                return count_library_loc(base / raw["source_path"], profile), ""
            if fetcher is not None:
                return count_library_loc(fetcher(gav), profile), ""
        except (OSError, ValueError) as exc:
            return None, str(exc)
        return None, "no source_path and no precomputed own_loc"

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            sizes = list(pool.map(measure, entries))
    else:
        sizes = [measure(e) for e in entries]

    nodes: Dict[VersionedCoordinate, _Node] = {}
    for ext in data.get("external", []):
        try:
            nodes[parse_gav(ext["gav"])] = _Node(int(ext["own_loc"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise CorpusError(f"bad external entry {ext!r}: {exc}") from exc
    for _, _, _, raw in entries:
        for d in raw.get("direct_deps", []):
            if d.get("own_loc") is not None:
                nodes.setdefault(parse_gav(d["gav"]), _Node(int(d["own_loc"])))
    for (gav, _, deps, _), (own, _) in zip(entries, sizes):
        if own is not None:
            nodes[gav] = _Node(own, deps)

    instances = []
    for (gav, released, deps, _), (own, problem) in zip(entries, sizes):
        if own is None:
            exclusions.append(Exclusion(str(gav), "missing_source", problem))
            log.warning("dropping %s: %s", gav, problem)
            continue
        if own < loc_filter_min:
            exclusions.append(Exclusion(str(gav), "below_loc_filter", f"own_loc={own} < {loc_filter_min}"))
            continue
        inst = LibraryInstance(gav=gav, released=released, own_loc=own, direct_deps=deps)
        try:
            dep_loc = sum_direct_dep_loc(inst, nodes, transitive=transitive)
        except UnresolvedDependencyError as exc:
            exclusions.append(Exclusion(str(gav), "unresolved_dependency", ";".join(exc.missing)))
            log.warning("dropping %s: %s", gav, exc)
            continue
        instances.append(replace(inst, dep_loc=dep_loc))

    instances.sort(key=lambda i: i.gav.sort_key())
    exclusions.sort(key=lambda e: (e.gav, e.reason))
    return Corpus(instances, exclusions)


@dataclass(frozen=True)
class VulnRecord:
    id: str
    coordinate: Coordinate
    affected: Tuple[VersionRange, ...]

    def affects(self, gav: VersionedCoordinate) -> bool:
        return gav.coordinate == self.coordinate and any(r.contains(gav.version) for r in self.affected)


def load_vuln_db(path) -> List[VulnRecord]:
    data = _read_json(path, "vulnerability database")
    if not isinstance(data, list):
        raise CorpusError(f"vulnerability database {path} must be a JSON array")
    records = []
    ids = set()
    for raw in data:
        rid = raw.get("id") if isinstance(raw, dict) else None
        if not rid:
            raise CorpusError(f"vulnerability record without id: {raw!r}")
        if rid in ids:
            raise CorpusError(f"duplicate vulnerability id {rid!r}")
        ids.add(rid)
        try:
            coord = parse_ga(raw["coord"])
            ranges = tuple(VersionRange.parse(r) for r in raw["affected"])
        except (KeyError, TypeError, ParseError) as exc:
            raise CorpusError(f"vulnerability record {rid!r}: {exc}") from exc
        if not ranges:
            raise CorpusError(f"vulnerability record {rid!r} has no affected ranges")
        records.append(VulnRecord(rid, coord, ranges))
    return records


def count_own_vulns(gav: VersionedCoordinate, vuln_db: Sequence[VulnRecord]) -> int:
    return sum(1 for v in vuln_db if v.affects(gav))


def annotate_vulnerabilities(corpus, vuln_db: Sequence[VulnRecord]):
    """Fill ``own_vulns``/``dep_vulns``. Only direct third-party deps are
    counted, each distinct dependency once."""
    by_ga: Dict[Coordinate, List[VulnRecord]] = {}
    for v in vuln_db:
        by_ga.setdefault(v.coordinate, []).append(v)

    def own(gav):
        return count_own_vulns(gav, by_ga.get(gav.coordinate, ()))

    instances = corpus.instances if isinstance(corpus, Corpus) else list(corpus)
    out = []
    for inst in instances:
        deps = dict.fromkeys(
            d for d in inst.direct_deps
            if classify_dependency_scope(inst.gav, d) is DependencyScope.THIRD_PARTY
        )
        out.append(replace(inst, own_vulns=own(inst.gav), dep_vulns=sum(own(d) for d in deps)))
    if isinstance(corpus, Corpus):
        return Corpus(out, list(corpus.exclusions))
    return out


# Remote repository ---------------------------------------------------------

def repository_path(gav: VersionedCoordinate, classifier: str = "", extension: str = "jar") -> str:
    """Relative path of an artifact in the standard Maven repository layout."""
    name = f"{gav.artifact}-{gav.version_text}"
    if classifier:
        name += f"-{classifier}"
    return "/".join([*gav.group.split("."), gav.artifact, gav.version_text, f"{name}.{extension}"])


_cache_locks: Dict[str, threading.Lock] = {}
_cache_locks_guard = threading.Lock()


def _lock_for(path: Path) -> threading.Lock:
    with _cache_locks_guard:
        return _cache_locks.setdefault(str(path.resolve()), threading.Lock())


def _download(url: str, dest: Path, timeout: float) -> None:
    with _lock_for(dest):
        if dest.exists():
            return
        try:
            with urllib.request.urlopen(url, timeout=timeout) as resp:
                payload = resp.read()
        except urllib.error.HTTPError as exc:
            if exc.code == 404:
                raise MissingArtifactError(f"not found: {url}") from exc
            raise RetryableFetchError(f"HTTP {exc.code} for {url}") from exc
        except (urllib.error.URLError, OSError) as exc:
            raise RetryableFetchError(f"network error for {url}: {exc}") from exc
        dest.parent.mkdir(parents=True, exist_ok=True)
        tmp = dest.with_name(dest.name + ".part")
        tmp.write_bytes(payload)
        os.replace(tmp, dest)


def fetch_remote(coordinate, repo_base_url: str, cache_dir, timeout: float = 30.0) -> Tuple[Path, Path]:
    """Download descriptor (``.pom``) and ``-sources.jar`` into ``cache_dir``.

    The cache mirrors the repository layout; files already present are
    returned without touching the network.
    """
    gav = parse_gav(coordinate) if isinstance(coordinate, str) else coordinate
    cache_dir = Path(cache_dir)
    out = []
    for rel in (repository_path(gav, extension="pom"), repository_path(gav, "sources")):
        dest = cache_dir.joinpath(*rel.split("/"))
        if not dest.exists():
            _download(repo_base_url.rstrip("/") + "/" + rel, dest, timeout)
        out.append(dest)
    return out[0], out[1]
