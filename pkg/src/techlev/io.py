"""CSV/JSON writers and readers for the pipeline's intermediate files.

All writes go to a temporary sibling first and are renamed into place.
Floats are written with 12 significant digits so that outputs do not
depend on the last bits of a BLAS routine.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from datetime import datetime
from pathlib import Path
from typing import Iterable, List, Sequence

from .exceptions import CorpusError
from .ingest import format_timestamp, parse_timestamp
from .metrics import ChangeRecord, SizeClass
from .model import LibraryInstance, parse_gav

INSTANCE_COLUMNS = ["gav", "released", "own_loc", "dep_loc", "own_vulns", "dep_vulns"]
EXCLUSION_COLUMNS = ["gav", "reason", "detail"]
CHAIN_COLUMNS = ["chain_id", "gav", "released", "rel_interval", "rel_interval_prev"]
CHANGE_COLUMNS = [
    "chain_id", "gav", "delta_dep", "delta_own", "rho", "theta", "lambda_dir", "rel_interval",
    "rel_interval_prev", "size_class", "is_vuln", "own_loc", "dep_loc", "n_vulns",
]


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value + 0.0, ".12g")
    if isinstance(value, datetime):
        return format_timestamp(value)
    if hasattr(value, "value"):  # enums
        return str(value.value)
    return str(value)


def jsonable(value):
    if isinstance(value, float):
        if not math.isfinite(value):
            return None
        return float(format(value + 0.0, ".12g"))
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if hasattr(value, "item") and callable(value.item):  # numpy scalars
        return jsonable(value.item())
    if hasattr(value, "value") and not isinstance(value, (int, str)):
        return value.value
    return value


def atomic_write_text(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def write_csv(path, columns: Sequence[str], rows: Iterable[Sequence]) -> Path:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return atomic_write_text(path, buf.getvalue())


def write_json(path, payload) -> Path:
    return atomic_write_text(path, json.dumps(jsonable(payload), indent=2, sort_keys=True) + "\n")


def read_csv(path) -> List[dict]:
    try:
        with open(path, newline="", encoding="utf-8") as f:
            return list(csv.DictReader(f))
    except FileNotFoundError as exc:
        raise CorpusError(f"input file not found: {path}") from exc


def _opt_int(text: str):
    return int(text) if text != "" else None


def write_instances(path, instances: Iterable[LibraryInstance]) -> Path:
    return write_csv(path, INSTANCE_COLUMNS, (
        (i.gav, i.released, i.own_loc, i.dep_loc, i.own_vulns, i.dep_vulns) for i in instances
    ))


def read_instances(path) -> List[LibraryInstance]:
    out = []
    for row in read_csv(path):
        try:
            out.append(LibraryInstance(
                gav=parse_gav(row["gav"]),
                released=parse_timestamp(row["released"]),
                own_loc=int(row["own_loc"]),
                dep_loc=int(row["dep_loc"]),
                own_vulns=int(row["own_vulns"]),
                dep_vulns=int(row["dep_vulns"]),
            ))
        except (KeyError, ValueError) as exc:
            raise CorpusError(f"{path}: bad row {row!r}: {exc}") from exc
    return out


def write_changes(path, records: Iterable[ChangeRecord]) -> Path:
    return write_csv(path, CHANGE_COLUMNS, (
        (r.chain_id, r.gav_to, r.delta_dep, r.delta_own, r.rho, r.theta, r.lambda_dir, r.rel_interval,
         r.rel_interval_prev, r.size_class, r.is_vuln, r.own_loc, r.dep_loc, r.n_vulns)
        for r in records
    ))


def read_changes(path) -> List[ChangeRecord]:
    out = []
    for row in read_csv(path):
        try:
            out.append(ChangeRecord(
                chain_id=row["chain_id"],
                gav_from=None,
                gav_to=parse_gav(row["gav"]),
                delta_dep=int(row["delta_dep"]),
                delta_own=int(row["delta_own"]),
                rho=float(row["rho"]),
                theta=float(row["theta"]),
                lambda_dir=float(row["lambda_dir"]),
                rel_interval=int(row["rel_interval"]),
                rel_interval_prev=_opt_int(row["rel_interval_prev"]),
                size_class=SizeClass(row["size_class"]),
                is_vuln=row["is_vuln"] == "true",
                own_loc=int(row["own_loc"]),
                dep_loc=int(row["dep_loc"]),
                n_vulns=int(row.get("n_vulns") or 0),
            ))
        except (KeyError, ValueError) as exc:
            raise CorpusError(f"{path}: bad row {row!r}: {exc}") from exc
    return out
