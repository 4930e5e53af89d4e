"""Comment- and blank-aware lines-of-code counting.

A physical line counts when at least one non-whitespace character on it
lies outside every comment. Block comments do not nest: the first close
delimiter ends the comment. String literals are not lexed, so a ``/*``
inside a literal opens a comment.
"""

from __future__ import annotations

import json
import os
import zipfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Tuple, Union

PathLike = Union[str, os.PathLike]


@dataclass(frozen=True)
class LanguageProfile:
    code_extensions: frozenset = frozenset({".java"})
    line_comment_prefixes: Tuple[str, ...] = ("//",)
    block_comment_delimiters: Tuple[Tuple[str, str], ...] = (("/*", "*/"),)

    def __post_init__(self):
        if not self.code_extensions:
            raise ValueError("a language profile needs at least one code extension")
        object.__setattr__(self, "code_extensions", frozenset(e.lower() for e in self.code_extensions))
        for p in self.line_comment_prefixes:
            if not p:
                raise ValueError("empty line-comment prefix")
        for pair in self.block_comment_delimiters:
            if len(pair) != 2 or not pair[0] or not pair[1]:
                raise ValueError(f"bad block-comment delimiter pair {pair!r}")

    @classmethod
    def from_dict(cls, data: dict) -> "LanguageProfile":
        return cls(
            code_extensions=frozenset(data.get("code_extensions", [".java"])),
            line_comment_prefixes=tuple(data.get("line_comment_prefixes", ["//"])),
            block_comment_delimiters=tuple(tuple(p) for p in data.get("block_comment_delimiters", [["/*", "*/"]])),
        )

    @classmethod
    def from_json(cls, path: PathLike) -> "LanguageProfile":
        with open(path, encoding="utf-8") as f:
            return cls.from_dict(json.load(f))

    def to_dict(self) -> dict:
        return {
            "code_extensions": sorted(self.code_extensions),
            "line_comment_prefixes": list(self.line_comment_prefixes),
            "block_comment_delimiters": [list(p) for p in self.block_comment_delimiters],
        }

    def is_code_file(self, name: str) -> bool:
        return os.path.splitext(name)[1].lower() in self.code_extensions


JAVA = LanguageProfile()


def split_lines(text: str) -> List[str]:
    text = text.replace("\r\n", "\n").replace("\r", "\n")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def count_text_loc(text: str, profile: LanguageProfile = JAVA) -> int:
    """Count code lines in already-decoded source text."""
    count = 0
    closer = None  # close delimiter of the block comment we are inside
    line_prefixes = profile.line_comment_prefixes
    blocks = profile.block_comment_delimiters
    for line in split_lines(text):
        has_code = False
        i, n = 0, len(line)
        while i < n:
            if closer is not None:
                j = line.find(closer, i)
                if j < 0:
                    break
                i = j + len(closer)
                closer = None
                continue
            if line.startswith(line_prefixes, i):
                break
            for open_, close in blocks:
                if line.startswith(open_, i):
                    closer = close
                    i += len(open_)
                    break
            else:
                if not line[i].isspace():
                    has_code = True
                i += 1
        if has_code:
            count += 1
    return count


def count_file_loc(file_path: PathLike, profile: LanguageProfile = JAVA) -> int:
    data = Path(file_path).read_bytes()
    return count_text_loc(data.decode("utf-8", errors="replace"), profile)


def iter_code_files(dir_path: PathLike, profile: LanguageProfile = JAVA) -> Iterator[str]:
    """Yield code files below ``dir_path`` in sorted order, skipping symlinks."""
    for root, dirs, files in os.walk(dir_path, followlinks=False):
        dirs.sort()
        for name in sorted(files):
            full = os.path.join(root, name)
            if profile.is_code_file(name) and not os.path.islink(full):
                yield full


def count_files(dir_path: PathLike, profile: LanguageProfile = JAVA, jobs: int = 1) -> Dict[str, int]:
    """Per-file counts keyed by path relative to ``dir_path`` (``/``-separated)."""
    if not os.path.isdir(dir_path):
        raise FileNotFoundError(f"source directory not found: {dir_path}")
    paths = list(iter_code_files(dir_path, profile))
    if jobs > 1 and len(paths) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            counts = list(pool.map(lambda p: count_file_loc(p, profile), paths))
    else:
        counts = [count_file_loc(p, profile) for p in paths]
    return {Path(os.path.relpath(p, dir_path)).as_posix(): c for p, c in zip(paths, counts)}


def count_archive_files(archive_path: PathLike, profile: LanguageProfile = JAVA) -> Dict[str, int]:
    """Per-file counts for a zip/jar source archive."""
    out = {}
    with zipfile.ZipFile(archive_path) as zf:
        for info in sorted(zf.infolist(), key=lambda i: i.filename):
            if info.is_dir() or not profile.is_code_file(info.filename):
                continue
            text = zf.read(info).decode("utf-8", errors="replace")
            out[info.filename] = count_text_loc(text, profile)
    return out


def count_library_loc(path: PathLike, profile: LanguageProfile = JAVA, jobs: int = 1) -> int:
    """Own size of a library: total code lines in a source tree or source archive."""
    if os.path.isfile(path) and zipfile.is_zipfile(path):
        return sum(count_archive_files(path, profile).values())
    return sum(count_files(path, profile, jobs).values())


def sum_direct_dep_loc(instance, index, transitive: bool = False) -> int:
    """Size of third-party code below ``instance``.

    ``index`` maps each :class:`VersionedCoordinate` to an object exposing
    ``own_loc`` and ``direct_deps``. With ``transitive=True`` the whole
    dependency closure is summed, each GAV once.
    """
    from .ingest import DependencyScope, classify_dependency_scope
    from .exceptions import UnresolvedDependencyError

    root = instance.gav

    def third_party(gavs: Iterable) -> list:
        return [d for d in gavs if classify_dependency_scope(root, d) is DependencyScope.THIRD_PARTY]

    direct = third_party(instance.direct_deps)
    missing = {str(d) for d in direct if d not in index}
    if missing:
        raise UnresolvedDependencyError(missing)
    if not transitive:
        return sum(index[d].own_loc for d in dict.fromkeys(direct))

    seen = {}
    stack = list(reversed(direct))
    while stack:
        gav = stack.pop()
        if gav in seen or gav == root:
            continue
        if gav not in index:
            missing.add(str(gav))
            continue
        node = index[gav]
        seen[gav] = node.own_loc
        stack.extend(reversed(third_party(getattr(node, "direct_deps", ()))))
    if missing:
        raise UnresolvedDependencyError(missing)
    return sum(seen.values())
