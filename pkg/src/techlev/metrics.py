"""Technical leverage and the polar description of a release-to-release change.

A change between two releases is the vector (delta_dep, delta_own) of
dependency-size and own-size differences. Its length is the change
distance ``rho`` and its angle the change direction ``theta`` in
degrees, normalised to (-45, 315] so that each of the four qualitative
quadrants (centred on 0, 90, 180, 270) is contiguous.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional

from .chains import ReleaseChain, compute_release_intervals
from .exceptions import LeverageUndefinedError
from .model import LibraryInstance, VersionedCoordinate

SIZE_CLASS_THRESHOLD = 100_000
THETA_LOW, THETA_HIGH = -45.0, 315.0
PRIMARY_TOLERANCE = 10.0


def technical_leverage(l_dir, l_trans=0, l_std=0, l_own=None) -> float:
    """``(l_dir + l_trans + l_std) / l_own``."""
    if l_own is None or l_own <= 0:
        raise LeverageUndefinedError(f"leverage undefined for own size {l_own!r}")
    return (l_dir + l_trans + l_std) / l_own


def direct_leverage(l_dir, l_own) -> float:
    return technical_leverage(l_dir, 0, 0, l_own)


def change_velocity(r0: LibraryInstance, r1: LibraryInstance):
    return r1.dep_loc - r0.dep_loc, r1.own_loc - r0.own_loc


def change_distance(delta_dep, delta_own) -> float:
    return math.hypot(delta_dep, delta_own)


def change_direction(delta_dep, delta_own) -> float:
    """Angle of (delta_dep, delta_own) in degrees, in (-45, 315].

    Evaluated with ``atan2``, which agrees with
    ``arccos(delta_dep / rho) * (+1 if delta_own > 0 else -1)`` everywhere
    but keeps full precision near 0 and 180 degrees. A zero vector maps
    to 0.
    """
    if delta_dep == 0 and delta_own == 0:
        return 0.0
    theta = math.degrees(math.atan2(delta_own, delta_dep))
    if theta <= THETA_LOW:
        theta += 360.0
    return theta + 0.0  # folds -0.0


class SizeClass(str, enum.Enum):
    SMALL_MEDIUM = "small_medium"
    LARGE = "large"


def size_class(own_loc, threshold: int = SIZE_CLASS_THRESHOLD) -> SizeClass:
    return SizeClass.SMALL_MEDIUM if own_loc <= threshold else SizeClass.LARGE


class PrimaryDirection(str, enum.Enum):
    DEPENDENCY_ADOPTING = "dependency_adopting"
    OWN_INCREASING = "own_increasing"
    DEPENDENCY_REMOVING = "dependency_removing"
    OWN_REMOVING = "own_removing"
    MIXED = "mixed"


class Dominance(str, enum.Enum):
    DEPENDENCY = "dependency_dominant"
    OWN = "own_dominant"


class TotalTrend(str, enum.Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"


@dataclass(frozen=True)
class DirectionClass:
    primary_direction: PrimaryDirection
    dominance: Dominance
    total_trend: TotalTrend


_CARDINALS = (
    (0.0, PrimaryDirection.DEPENDENCY_ADOPTING),
    (90.0, PrimaryDirection.OWN_INCREASING),
    (180.0, PrimaryDirection.DEPENDENCY_REMOVING),
    (270.0, PrimaryDirection.OWN_REMOVING),
)


def classify_direction(theta: float, tolerance: float = PRIMARY_TOLERANCE) -> DirectionClass:
    # intervals below are modulo 360, e.g. (315;45] == (-45;45]
    t = theta % 360.0
    if t > 315.0:
        t -= 360.0
    dep = -45.0 < t <= 45.0 or 135.0 < t <= 225.0
    increasing = -45.0 < t <= 135.0

    primary = PrimaryDirection.MIXED
    for centre, label in _CARDINALS:
        diff = abs((theta - centre + 180.0) % 360.0 - 180.0)
        if diff <= tolerance:
            primary = label
            break
    return DirectionClass(
        primary,
        Dominance.DEPENDENCY if dep else Dominance.OWN,
        TotalTrend.INCREASING if increasing else TotalTrend.DECREASING,
    )


@dataclass(frozen=True)
class ChangeRecord:
    """Measurements for one consecutive release pair of a chain.

    ``lambda_dir``, sizes, vulnerability data and size class describe the
    newer release.
    """

    chain_id: str
    gav_from: VersionedCoordinate
    gav_to: VersionedCoordinate
    delta_dep: int
    delta_own: int
    rho: float
    theta: float
    lambda_dir: float
    rel_interval: int
    rel_interval_prev: Optional[int]
    size_class: SizeClass
    is_vuln: bool
    own_loc: int
    dep_loc: int
    n_vulns: int = 0

    @property
    def gav(self) -> VersionedCoordinate:
        return self.gav_to

    @property
    def has_prev(self) -> bool:
        return self.rel_interval_prev is not None

    @property
    def direction(self) -> DirectionClass:
        return classify_direction(self.theta)


def make_change_record(chain_id, r0, r1, rel_interval, rel_interval_prev=None,
                       size_threshold: int = SIZE_CLASS_THRESHOLD, l_std: int = 0) -> ChangeRecord:
    d_dep, d_own = change_velocity(r0, r1)
    return ChangeRecord(
        chain_id=chain_id,
        gav_from=r0.gav,
        gav_to=r1.gav,
        delta_dep=d_dep,
        delta_own=d_own,
        rho=change_distance(d_dep, d_own),
        theta=change_direction(d_dep, d_own),
        lambda_dir=technical_leverage(r1.dep_loc, 0, l_std, r1.own_loc),
        rel_interval=rel_interval,
        rel_interval_prev=rel_interval_prev,
        size_class=size_class(r1.own_loc, size_threshold),
        is_vuln=r1.is_vuln,
        own_loc=r1.own_loc,
        dep_loc=r1.dep_loc,
        n_vulns=r1.own_vulns + r1.dep_vulns,
    )


def build_change_records(chains: Iterable[ReleaseChain], size_threshold: int = SIZE_CLASS_THRESHOLD,
                         l_std: int = 0) -> List[ChangeRecord]:
    """One record per consecutive pair; the first pair of a chain has no
    ``rel_interval_prev``."""
    records = []
    for chain in chains:
        steps = compute_release_intervals(chain)
        for prev, step in zip(steps, steps[1:]):
            records.append(make_change_record(
                chain.chain_id, prev.instance, step.instance, step.rel_interval,
                step.rel_interval_prev, size_threshold, l_std,
            ))
    return records
