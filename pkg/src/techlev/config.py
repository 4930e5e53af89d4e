"""Tool configuration: JSON file, then ``TECHLEV_*`` environment, then CLI flags."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Mapping, Optional, Tuple

from .exceptions import ConfigError
from .loc import JAVA, LanguageProfile

ENV_PREFIX = "TECHLEV_"

_PATH_FIELDS = ("manifest_path", "vuln_db_path", "output_dir", "cache_dir")


@dataclass(frozen=True)
class ToolConfig:
    manifest_path: Optional[Path] = None
    vuln_db_path: Optional[Path] = None
    language_profile: LanguageProfile = JAVA
    loc_filter_min: int = 100
    size_class_threshold: int = 100_000
    lambda_threshold_small: float = 4.0
    lambda_threshold_large: float = 0.125
    output_dir: Path = Path("techlev-out")
    cache_dir: Path = Path(".techlev-cache")
    remote_repo_url: Optional[str] = None
    branch_key_tokens: int = 1
    transitive: bool = False
    l_std: int = 0
    kde_grid: int = 360
    kde_bandwidth: Optional[float] = None
    kde_circular: bool = False
    payoff_beta: Optional[float] = None
    payoff_lambdas: Tuple[float, ...] = (1.0, 2.0, 4.0, 8.0, 16.0)
    dump_file_loc: bool = False
    jobs: int = 1
    deterministic: bool = False

    def validate(self) -> "ToolConfig":
        for name in ("lambda_threshold_small", "lambda_threshold_large", "size_class_threshold"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if self.loc_filter_min < 0:
            raise ConfigError("loc_filter_min must be non-negative")
        if self.branch_key_tokens < 1:
            raise ConfigError("branch_key_tokens must be at least 1")
        if self.jobs < 1:
            raise ConfigError("jobs must be at least 1")
        if self.kde_grid < 2:
            raise ConfigError("kde_grid must be at least 2")
        if self.kde_bandwidth is not None and not self.kde_bandwidth > 0:
            raise ConfigError("kde_bandwidth must be positive")
        for name in ("manifest_path", "vuln_db_path"):
            p = getattr(self, name)
            if p is not None and not Path(p).is_file():
                raise ConfigError(f"{name} does not exist: {p}")
        return self

    def lambda_threshold(self, size_class) -> float:
        key = getattr(size_class, "value", size_class)
        return self.lambda_threshold_small if key == "small_medium" else self.lambda_threshold_large


_FIELD_TYPES = {f.name: str(f.type) for f in fields(ToolConfig)}


def _coerce(name: str, value, base: Path):
    if value is None:
        return None
    kind = _FIELD_TYPES[name]
    try:
        if name in _PATH_FIELDS:
            p = Path(value)
            return p if p.is_absolute() else base / p
        if name == "language_profile":
            if isinstance(value, str):
                return LanguageProfile.from_json(base / value)
            return LanguageProfile.from_dict(value)
        if name == "payoff_lambdas":
            if isinstance(value, str):
                value = value.split(",")
            return tuple(float(v) for v in value)
        if "bool" in kind:
            if isinstance(value, str):
                if value.lower() not in ("1", "0", "true", "false", "yes", "no"):
                    raise ValueError(value)
                return value.lower() in ("1", "true", "yes")
            return bool(value)
        if "int" in kind:
            return int(value)
        if "float" in kind:
            return float(value)
        return str(value)
    except (TypeError, ValueError, OSError) as exc:
        raise ConfigError(f"bad value for {name}: {value!r} ({exc})") from exc


def _flatten(data: Mapping) -> dict:
    out = dict(data)
    thresholds = out.pop("lambda_thresholds", None)
    if thresholds is not None:
        out.setdefault("lambda_threshold_small", thresholds.get("small", 4.0))
        out.setdefault("lambda_threshold_large", thresholds.get("large", 0.125))
    return out


def load_config(path=None, env: Optional[Mapping[str, str]] = None, overrides: Optional[Mapping] = None) -> ToolConfig:
    """Build a validated :class:`ToolConfig`.

    Relative paths in the file resolve against the file's directory; those
    from the environment or ``overrides`` against the working directory.
    """
    values = {}
    if path is not None:
        path = Path(path)
        try:
            with open(path, encoding="utf-8") as f:
                data = json.load(f)
        except FileNotFoundError as exc:
            raise ConfigError(f"config file not found: {path}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"config file {path} must hold a JSON object")
        data = _flatten(data)
        unknown = sorted(set(data) - set(_FIELD_TYPES))
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        values.update({k: _coerce(k, v, path.parent) for k, v in data.items()})

    env = os.environ if env is None else env
    cwd = Path.cwd()
    for name in _FIELD_TYPES:
        key = ENV_PREFIX + name.upper()
        if key in env:
            values[name] = _coerce(name, env[key], cwd)

    for name, value in (overrides or {}).items():
        if value is not None:
            values[name] = _coerce(name, value, cwd)
    return replace(ToolConfig(), **values).validate()
