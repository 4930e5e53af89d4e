"""Technical leverage metrics for versioned library corpora."""

from .chains import ReleaseChain, compute_release_intervals, split_corpus, split_release_chains
from .ingest import (
    Corpus,
    DependencyScope,
    VulnRecord,
    annotate_vulnerabilities,
    classify_dependency_scope,
    fetch_remote,
    load_corpus,
    load_vuln_db,
)
from .loc import LanguageProfile, count_file_loc, count_library_loc, sum_direct_dep_loc
from .metrics import (
    ChangeRecord,
    DirectionClass,
    SizeClass,
    build_change_records,
    change_direction,
    change_distance,
    change_velocity,
    classify_direction,
    direct_leverage,
    technical_leverage,
)
from .model import (
    Coordinate,
    LibraryInstance,
    VersionRange,
    VersionedCoordinate,
    compare_versions,
    parse_coordinate,
    parse_gav,
    range_contains,
    tokenize_version,
)

__version__ = "0.1.0"

__all__ = [
    "ChangeRecord",
    "Coordinate",
    "Corpus",
    "DependencyScope",
    "DirectionClass",
    "LanguageProfile",
    "LibraryInstance",
    "ReleaseChain",
    "SizeClass",
    "VersionRange",
    "VersionedCoordinate",
    "VulnRecord",
    "annotate_vulnerabilities",
    "build_change_records",
    "change_direction",
    "change_distance",
    "change_velocity",
    "classify_dependency_scope",
    "classify_direction",
    "compare_versions",
    "compute_release_intervals",
    "count_file_loc",
    "count_library_loc",
    "direct_leverage",
    "fetch_remote",
    "load_corpus",
    "load_vuln_db",
    "parse_coordinate",
    "parse_gav",
    "range_contains",
    "split_corpus",
    "split_release_chains",
    "sum_direct_dep_loc",
    "technical_leverage",
    "tokenize_version",
]
