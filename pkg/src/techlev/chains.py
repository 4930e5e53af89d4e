"""Release-chain splitting for libraries that maintain parallel branches.

Releases of one library are visited in date order. The first release
opens the main chain. A later release joins the branch named after its
leading version token(s) if that branch exists; otherwise it opens that
branch when it is older (by version) than the main chain's tail, and
extends the main chain when it is not.

For Tomcat-style release interleaving ``8.5.30, 9.0.7, 7.0.86, 8.0.51,
9.0.8, 8.5.31`` this yields the main chain ``8.5.30 -> 9.0.7 -> 9.0.8``
plus branches ``7`` and ``8``. Note that ``8.0.x`` and ``8.5.x`` share a
branch under the default one-token key; pass ``key_tokens=2`` to split
them.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from datetime import timedelta
from typing import Dict, Iterable, List, Optional, Tuple

from .exceptions import ChainOrderError
from .model import LibraryInstance, compare_versions, render_version

_DAY = timedelta(days=1)


def days_between(earlier, later) -> int:
    """Whole days elapsed, floored."""
    return (later - earlier) // _DAY


@dataclass(frozen=True)
class ReleaseStep:
    """One instance in a chain with the interval to its predecessor."""

    chain_id: str
    instance: LibraryInstance
    rel_interval: Optional[int]
    rel_interval_prev: Optional[int]


@dataclass(frozen=True)
class ReleaseChain:
    chain_id: str
    instances: Tuple[LibraryInstance, ...]
    intervals: Tuple[int, ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "instances", tuple(self.instances))
        object.__setattr__(
            self,
            "intervals",
            tuple(days_between(a.released, b.released) for a, b in zip(self.instances, self.instances[1:])),
        )

    def __len__(self):
        return len(self.instances)

    def steps(self) -> List[ReleaseStep]:
        return compute_release_intervals(self)


def _branch_key(inst: LibraryInstance, key_tokens: int) -> str:
    return f"{inst.coordinate}#{render_version(inst.version[:key_tokens])}"


def _check_order(instances: List[LibraryInstance]) -> None:
    for a, b in zip(instances, instances[1:]):
        if a.coordinate != b.coordinate:
            raise ChainOrderError(f"mixed libraries in one release list: {a.coordinate} and {b.coordinate}")
        if b.released < a.released or (
            b.released == a.released and compare_versions(b.version, a.version) < 0
        ):
            raise ChainOrderError(f"releases not in date order: {a.gav} before {b.gav}")


def split_release_chains(instances: Iterable[LibraryInstance], key_tokens: int = 1) -> List[ReleaseChain]:
    """Partition one library's date-ordered releases into release chains.

    The main chain comes first (id ``group:artifact``), then branches in
    order of creation (id ``group:artifact#<leading tokens>``).
    """
    instances = list(instances)
    if not instances:
        return []
    _check_order(instances)

    main = [instances[0]]
    branches: Dict[str, List[LibraryInstance]] = {}
    for inst in instances[1:]:
        key = _branch_key(inst, key_tokens)
        if key in branches:
            branches[key].append(inst)
        elif compare_versions(inst.version, main[-1].version) < 0:
            branches[key] = [inst]
        else:
            main.append(inst)

    chains = [ReleaseChain(str(instances[0].coordinate), main)]
    chains.extend(ReleaseChain(key, members) for key, members in branches.items())
    return chains


def release_order_key(inst: LibraryInstance):
    from .model import version_sort_key

    return (inst.released, version_sort_key(inst.version), inst.gav.version_text)


def split_corpus(instances: Iterable[LibraryInstance], key_tokens: int = 1) -> List[ReleaseChain]:
    """Group a whole corpus by library, sort each by release date and split."""
    by_ga = defaultdict(list)
    for inst in instances:
        by_ga[inst.coordinate].append(inst)
    chains = []
    for ga in sorted(by_ga):
        chains.extend(split_release_chains(sorted(by_ga[ga], key=release_order_key), key_tokens))
    return chains


def compute_release_intervals(chain: ReleaseChain) -> List[ReleaseStep]:
    """Per-instance ``rel_interval`` (days since predecessor) and
    ``rel_interval_prev`` (the predecessor's own interval)."""
    steps = []
    prev = None
    for i, inst in enumerate(chain.instances):
        cur = chain.intervals[i - 1] if i > 0 else None
        steps.append(ReleaseStep(chain.chain_id, inst, cur, prev))
        prev = cur
    return steps
