"""Exposure/outcome analysis: contingency tables, odds ratios, Fisher's test."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Dict, List, NamedTuple

from ..exceptions import OddsRatioUndefinedError

Z_95 = 1.959963984540054


@dataclass(frozen=True)
class ContingencyTable:
    """Counts of (high leverage | low leverage) x (vulnerable | safe)."""

    exposed_vuln: int
    exposed_safe: int
    unexposed_vuln: int
    unexposed_safe: int
    threshold: float = float("nan")

    def __post_init__(self):
        if min(self.cells) < 0:
            raise ValueError(f"negative cell in {self.cells}")

    @property
    def cells(self):
        return (self.exposed_vuln, self.exposed_safe, self.unexposed_vuln, self.unexposed_safe)

    @property
    def total(self) -> int:
        return sum(self.cells)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class OddsResult:
    odds_ratio: float
    ci_low: float
    ci_high: float
    fisher_p: float

    def to_dict(self) -> dict:
        return asdict(self)


def contingency(records, lambda_threshold: float, size_class=None) -> ContingencyTable:
    """Cross-tabulate ``lambda_dir > threshold`` against ``is_vuln``.

    Each GAV is counted once (its first occurrence wins).
    """
    seen = set()
    a = b = c = d = 0
    for rec in records:
        if size_class is not None and rec.size_class != size_class:
            continue
        if rec.gav in seen:
            continue
        seen.add(rec.gav)
        exposed = rec.lambda_dir > lambda_threshold
        if exposed and rec.is_vuln:
            a += 1
        elif exposed:
            b += 1
        elif rec.is_vuln:
            c += 1
        else:
            d += 1
    return ContingencyTable(a, b, c, d, float(lambda_threshold))


def _log_comb(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def fisher_exact_p(a: int, b: int, c: int, d: int) -> float:
    """Two-sided p-value: total probability of tables with the observed
    margins that are no more likely than the observed one."""
    row1, row2, col1 = a + b, c + d, a + c
    lo, hi = max(0, col1 - row2), min(row1, col1)
    log_norm = _log_comb(row1 + row2, col1)
    logp = [_log_comb(row1, x) + _log_comb(row2, col1 - x) - log_norm for x in range(lo, hi + 1)]
    observed = logp[a - lo]
    # relative slack so ties lost to rounding still count as "as extreme"
    cutoff = observed + math.log1p(1e-7)
    p = math.fsum(math.exp(v) for v in logp if v <= cutoff)
    return min(1.0, p)


def odds_analysis(table: ContingencyTable, z: float = Z_95) -> OddsResult:
    """Odds ratio with a Woolf (log-OR normal) confidence interval and the
    two-sided Fisher exact p-value."""
    a, b, c, d = table.cells
    p = fisher_exact_p(a, b, c, d)
    if 0 in (a, b, c, d):
        raise OddsRatioUndefinedError(f"odds ratio undefined with a zero cell: {table.cells}", p)
    log_or = math.log(a) - math.log(b) - math.log(c) + math.log(d)
    se = math.sqrt(1 / a + 1 / b + 1 / c + 1 / d)
    return OddsResult(
        odds_ratio=math.exp(log_or),
        ci_low=math.exp(log_or - z * se),
        ci_high=math.exp(log_or + z * se),
        fisher_p=p,
    )


class LeveragePoint(NamedTuple):
    ga: str
    n_vulns: int
    max_lambda_dir: float


def max_leverage_by_vuln_count(records) -> List[LeveragePoint]:
    """Per library (GA): the largest ``lambda_dir`` over its versions paired
    with its vulnerability count (the largest ``n_vulns`` over versions)."""
    best: Dict[str, List] = {}
    for rec in records:
        ga = str(rec.gav.coordinate)
        n = getattr(rec, "n_vulns", int(rec.is_vuln))
        cur = best.setdefault(ga, [n, rec.lambda_dir])
        cur[0] = max(cur[0], n)
        cur[1] = max(cur[1], rec.lambda_dir)
    points = [LeveragePoint(ga, n, lam) for ga, (n, lam) in best.items()]
    return sorted(points, key=lambda p: (p.n_vulns, p.ga))
