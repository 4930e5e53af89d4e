"""Domain types: library coordinates, version ordering, version ranges.

Versions are kept as tuples of tokens, each token either a non-negative
``int`` or a lowercase ``str`` qualifier. Ordering is a simplified
Maven-style order:

* missing trailing tokens count as numeric ``0`` (so ``1.2 == 1.2.0``),
* numbers compare numerically, qualifiers lexicographically,
* a qualifier sorts before any number (``1.0-alpha < 1.0``).
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass, field
from datetime import datetime
from typing import Optional, Sequence, Tuple, Union

from .exceptions import ParseError

Token = Union[int, str]
Version = Tuple[Token, ...]

_TOKEN_RE = re.compile(r"\d+|[^\d._\-]+")


def tokenize_version(text: str) -> Version:
    """Split a version string on ``.``, ``-``, ``_`` and digit/letter boundaries."""
    tokens: list[Token] = []
    for piece in _TOKEN_RE.findall(text):
        tokens.append(int(piece) if piece.isdigit() else piece.lower())
    if not tokens:
        raise ParseError(f"version {text!r} has no tokens")
    return tuple(tokens)


def render_version(tokens: Sequence[Token]) -> str:
    return ".".join(str(t) for t in tokens)


def _compare_token(a: Token, b: Token) -> int:
    a_num = isinstance(a, int)
    b_num = isinstance(b, int)
    if a_num != b_num:
        return 1 if a_num else -1
    return (a > b) - (a < b)


def compare_versions(a: Sequence[Token], b: Sequence[Token]) -> int:
    """Three-way comparison: -1 if ``a < b``, 0 if equal, 1 if ``a > b``."""
    if not a or not b:
        raise ValueError("cannot compare empty versions")
    for i in range(max(len(a), len(b))):
        ta = a[i] if i < len(a) else 0
        tb = b[i] if i < len(b) else 0
        c = _compare_token(ta, tb)
        if c:
            return c
    return 0


version_sort_key = functools.cmp_to_key(compare_versions)


@dataclass(frozen=True, order=True)
class Coordinate:
    """A library identity, ``group:artifact``."""

    group: str
    artifact: str

    def __post_init__(self):
        if not self.group or not self.artifact:
            raise ParseError(f"empty field in coordinate {self.group!r}:{self.artifact!r}")

    def __str__(self) -> str:
        return f"{self.group}:{self.artifact}"


@dataclass(frozen=True)
class VersionedCoordinate:
    """A library instance identity, ``group:artifact:version``.

    ``version_text`` preserves the original spelling so that ``1.2`` and
    ``1.2.0`` stay distinct instances even though they order as equal.
    """

    coordinate: Coordinate
    version_text: str
    version: Version = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if not self.version_text:
            raise ParseError(f"empty version segment in {self.coordinate}:")
        object.__setattr__(self, "version", tokenize_version(self.version_text))

    @property
    def group(self) -> str:
        return self.coordinate.group

    @property
    def artifact(self) -> str:
        return self.coordinate.artifact

    def __str__(self) -> str:
        return f"{self.coordinate}:{self.version_text}"

    def sort_key(self):
        return (self.group, self.artifact, version_sort_key(self.version), self.version_text)


def parse_coordinate(text: str) -> Union[Coordinate, VersionedCoordinate]:
    """Parse ``g:a`` into a :class:`Coordinate` or ``g:a:v`` into a
    :class:`VersionedCoordinate`."""
    parts = text.strip().split(":")
    if len(parts) not in (2, 3):
        raise ParseError(f"expected 2 or 3 ':'-separated segments in {text!r}, got {len(parts)}")
    names = ("group", "artifact", "version")
    for name, part in zip(names, parts):
        if not part:
            raise ParseError(f"empty {name} segment in {text!r}")
    coord = Coordinate(parts[0], parts[1])
    if len(parts) == 2:
        return coord
    return VersionedCoordinate(coord, parts[2])


def parse_gav(text: str) -> VersionedCoordinate:
    parsed = parse_coordinate(text)
    if not isinstance(parsed, VersionedCoordinate):
        raise ParseError(f"missing version segment in {text!r}")
    return parsed


def parse_ga(text: str) -> Coordinate:
    parsed = parse_coordinate(text)
    if not isinstance(parsed, Coordinate):
        raise ParseError(f"expected group:artifact, got {text!r}")
    return parsed


@dataclass(frozen=True)
class VersionRange:
    """Interval of versions in Maven bracket syntax.

    ``[1.0,2.0)``, ``(,1.5]``, ``[1.0,)`` and the exact form ``[1.2.3]``.
    A ``None`` bound is unbounded.
    """

    lower: Optional[Version] = None
    lower_inclusive: bool = False
    upper: Optional[Version] = None
    upper_inclusive: bool = False
    text: str = field(default="", compare=False)

    def __post_init__(self):
        if self.lower is not None and self.upper is not None:
            if compare_versions(self.lower, self.upper) > 0:
                raise ParseError(f"lower bound above upper bound in range {self.text!r}")

    @classmethod
    def parse(cls, text: str) -> "VersionRange":
        s = text.strip()
        if len(s) < 3 or s[0] not in "[(" or s[-1] not in "])":
            raise ParseError(f"malformed version range {text!r}")
        body = s[1:-1]
        if "," not in body:
            if s[0] != "[" or s[-1] != "]" or not body.strip():
                raise ParseError(f"exact version range must look like [x.y], got {text!r}")
            v = tokenize_version(body.strip())
            return cls(v, True, v, True, text=s)
        if body.count(",") != 1:
            raise ParseError(f"too many ',' in version range {text!r}")
        lo_text, hi_text = (p.strip() for p in body.split(","))
        lo = tokenize_version(lo_text) if lo_text else None
        hi = tokenize_version(hi_text) if hi_text else None
        if lo is None and s[0] == "[":
            raise ParseError(f"unbounded lower end must be open in {text!r}")
        if hi is None and s[-1] == "]":
            raise ParseError(f"unbounded upper end must be open in {text!r}")
        return cls(lo, s[0] == "[", hi, s[-1] == "]", text=s)

    def contains(self, version: Union[Version, str]) -> bool:
        if isinstance(version, str):
            version = tokenize_version(version)
        if self.lower is not None:
            c = compare_versions(version, self.lower)
            if c < 0 or (c == 0 and not self.lower_inclusive):
                return False
        if self.upper is not None:
            c = compare_versions(version, self.upper)
            if c > 0 or (c == 0 and not self.upper_inclusive):
                return False
        return True

    def __str__(self) -> str:
        if self.text:
            return self.text
        lo = render_version(self.lower) if self.lower is not None else ""
        hi = render_version(self.upper) if self.upper is not None else ""
        return ("[" if self.lower_inclusive else "(") + f"{lo},{hi}" + ("]" if self.upper_inclusive else ")")


def range_contains(vrange: Union[VersionRange, str], version: Union[Version, str]) -> bool:
    if isinstance(vrange, str):
        vrange = VersionRange.parse(vrange)
    return vrange.contains(version)


@dataclass(frozen=True)
class LibraryInstance:
    """One released version of a library, with its measured sizes."""

    gav: VersionedCoordinate
    released: datetime
    own_loc: int
    direct_deps: Tuple[VersionedCoordinate, ...] = ()
    dep_loc: int = 0
    own_vulns: int = 0
    dep_vulns: int = 0

    def __post_init__(self):
        if self.own_loc < 0 or self.dep_loc < 0:
            raise ValueError(f"negative LoC for {self.gav}")
        if self.own_vulns < 0 or self.dep_vulns < 0:
            raise ValueError(f"negative vulnerability count for {self.gav}")

    @property
    def coordinate(self) -> Coordinate:
        return self.gav.coordinate

    @property
    def version(self) -> Version:
        return self.gav.version

    @property
    def is_vuln(self) -> bool:
        return self.own_vulns + self.dep_vulns > 0

    @property
    def lambda_dir(self) -> float:
        from .metrics import direct_leverage

        return direct_leverage(self.dep_loc, self.own_loc)
