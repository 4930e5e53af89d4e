"""Pearson correlation on log scale and descriptive summaries."""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy import stats

from ..exceptions import StatisticsError


class CorrelationResult(NamedTuple):
    r: float
    p_value: float
    n: int


def pearson_log(xs, ys) -> CorrelationResult:
    """Pearson r between ``log(xs)`` and ``log(ys)``; p from the t-transform
    with n - 2 degrees of freedom."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("xs and ys must be 1-d and of equal length")
    n = x.size
    if n < 3:
        raise StatisticsError(f"need at least 3 pairs, got {n}")
    if np.any(x <= 0) or np.any(y <= 0):
        raise ValueError("log-correlation requires strictly positive values")
    lx = np.log(x) - np.log(x).mean()
    ly = np.log(y) - np.log(y).mean()
    sxx, syy = float(lx @ lx), float(ly @ ly)
    if sxx == 0 or syy == 0:
        raise StatisticsError("correlation undefined: zero variance")
    r = float(lx @ ly) / math.sqrt(sxx * syy)
    r = max(-1.0, min(1.0, r))
    if abs(r) >= 1.0:
        return CorrelationResult(r, 0.0, n)
    t = r * math.sqrt((n - 2) / (1.0 - r * r))
    p = float(2.0 * stats.t.sf(abs(t), n - 2))
    return CorrelationResult(r, p, n)


SUMMARY_FIELDS = ("n", "mean", "median", "std", "min", "max", "q25", "q75")


def describe(values) -> dict:
    """mean/median/sample st.dev/min/max and linearly interpolated quartiles.

    Empty input gives ``n = 0`` and ``None`` everywhere else.
    """
    x = np.asarray(list(values), dtype=float)
    if x.size == 0:
        return {k: (0 if k == "n" else None) for k in SUMMARY_FIELDS}
    q25, med, q75 = np.percentile(x, [25, 50, 75])
    return {
        "n": int(x.size),
        "mean": float(x.mean()),
        "median": float(med),
        "std": float(x.std(ddof=1)) if x.size > 1 else 0.0,
        "min": float(x.min()),
        "max": float(x.max()),
        "q25": float(q25),
        "q75": float(q75),
    }
