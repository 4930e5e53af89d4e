"""Pipeline stages behind the CLI verbs.

Each ``cmd_*`` function reads its inputs from / writes its outputs to
``config.output_dir`` and returns the list of files it wrote.

measure  -> instances.csv, exclusions.csv [, loc_files.csv]
analyze  -> chains.csv, changes.csv, summary.json
stats    -> regression.json/.txt, odds.json, kde_<class>.csv, correlation.json, payoff.json/.csv
plot     -> <kind>.svg plus <kind>.csv with the plotted series
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Callable, Dict, List

from .chains import compute_release_intervals, split_corpus
from .config import ToolConfig
from .exceptions import ConfigError, CorpusError, OddsRatioUndefinedError, StatisticsError
from .ingest import annotate_vulnerabilities, fetch_remote, load_corpus, load_vuln_db
from .io import (
    CHAIN_COLUMNS,
    EXCLUSION_COLUMNS,
    atomic_write_text,
    read_changes,
    read_instances,
    write_changes,
    write_csv,
    write_instances,
    write_json,
)
from .loc import count_archive_files, count_files
from .metrics import SizeClass, build_change_records, size_class
from .plotting import line_chart_svg, scatter_svg
from .stats import (
    AngleKDE,
    build_regression_dataset,
    contingency,
    describe,
    max_leverage_by_vuln_count,
    odds_analysis,
    ols_fit,
    payoff_ratio,
    pearson_log,
)

log = logging.getLogger(__name__)

SIZE_CLASSES = (SizeClass.SMALL_MEDIUM, SizeClass.LARGE)
STATS_KINDS = ("regress", "odds", "kde", "correlation", "payoff")
PLOT_KINDS = ("kde_theta", "leverage_scatter", "max_lev_vulns")


def _out(config: ToolConfig, name: str) -> Path:
    return Path(config.output_dir) / name


# measure -----------------------------------------------------------------

def cmd_measure(config: ToolConfig) -> List[Path]:
    if config.manifest_path is None:
        raise ConfigError("measure needs manifest_path (config file, TECHLEV_MANIFEST_PATH or --manifest)")
    fetcher = None
    if config.remote_repo_url:
        def fetch_sources(gav):
            return fetch_remote(gav, config.remote_repo_url, config.cache_dir)[1]
        fetcher = fetch_sources

    corpus = load_corpus(
        config.manifest_path,
        profile=config.language_profile,
        loc_filter_min=config.loc_filter_min,
        jobs=config.jobs,
        transitive=config.transitive,
        fetcher=fetcher,
    )
    if config.vuln_db_path is not None:
        corpus = annotate_vulnerabilities(corpus, load_vuln_db(config.vuln_db_path))
    for exc in corpus.exclusions:
        log.info("excluded %s (%s) %s", exc.gav, exc.reason, exc.detail)

    written = [
        write_instances(_out(config, "instances.csv"), corpus.instances),
        write_csv(_out(config, "exclusions.csv"), EXCLUSION_COLUMNS,
                  ((e.gav, e.reason, e.detail) for e in corpus.exclusions)),
    ]
    if config.dump_file_loc:
        written.append(_dump_file_loc(config))
    return written


def _dump_file_loc(config: ToolConfig) -> Path:
    manifest = Path(config.manifest_path)
    with open(manifest, encoding="utf-8") as f:
        libraries = json.load(f)["libraries"]
    rows = []
    for lib in sorted(libraries, key=lambda l: l["gav"]):
        if not lib.get("source_path"):
            continue
        src = manifest.parent / lib["source_path"]
        counts = count_files(src, config.language_profile) if src.is_dir() \
            else count_archive_files(src, config.language_profile)
        rows.extend((lib["gav"], path, n) for path, n in counts.items())
    return write_csv(_out(config, "loc_files.csv"), ["gav", "path", "loc"], rows)


# analyze -----------------------------------------------------------------

def cmd_analyze(config: ToolConfig) -> List[Path]:
    instances = read_instances(_out(config, "instances.csv"))
    chains = split_corpus(instances, key_tokens=config.branch_key_tokens)
    if not chains:
        raise CorpusError("no release chains: instances.csv is empty")
    records = build_change_records(chains, config.size_class_threshold, config.l_std)

    chain_rows = []
    for chain in chains:
        for step in compute_release_intervals(chain):
            inst = step.instance
            chain_rows.append((chain.chain_id, inst.gav, inst.released, step.rel_interval, step.rel_interval_prev))

    summary = {
        "instances": len(instances),
        "chains": len(chains),
        "records": len(records),
        "size_classes": {},
    }
    for sc in SIZE_CLASSES:
        subset = [r for r in records if r.size_class is sc]
        summary["size_classes"][sc.value] = {
            "n": len(subset),
            "instances": sum(1 for i in instances if size_class(i.own_loc, config.size_class_threshold) is sc),
            "lambda_dir": describe(r.lambda_dir for r in subset),
            "rho": describe(r.rho for r in subset),
            "theta": describe(r.theta for r in subset),
        }
    return [
        write_csv(_out(config, "chains.csv"), CHAIN_COLUMNS, chain_rows),
        write_changes(_out(config, "changes.csv"), records),
        write_json(_out(config, "summary.json"), summary),
    ]


# stats -------------------------------------------------------------------

def _per_class(records, fn) -> Dict[str, dict]:
    out = {}
    for sc in SIZE_CLASSES:
        try:
            out[sc.value] = fn(sc, [r for r in records if r.size_class is sc])
        except StatisticsError as exc:
            out[sc.value] = {"error": str(exc), **getattr(exc, "payload", {})}
    return out


def _all_failed(results: Dict[str, dict], what: str) -> None:
    if all("error" in v for v in results.values()):
        detail = "; ".join(f"{k}: {v['error']}" for k, v in results.items())
        raise StatisticsError(f"{what} failed for every size class ({detail})")


def _fit(sc, subset):
    ds = build_regression_dataset(subset, sc)
    return ds, ols_fit(ds.design, ds.response, ds.names)


def stats_regress(config: ToolConfig, records) -> List[Path]:
    texts = []

    def one(sc, subset):
        ds, res = _fit(sc, subset)
        texts.append(f"[{sc.value}]\n{res.table()}\nexcluded: {ds.excluded}\n")
        return {**res.to_dict(), "excluded": ds.excluded}

    results = _per_class(records, one)
    _all_failed(results, "regression")
    return [
        write_json(_out(config, "regression.json"), results),
        atomic_write_text(_out(config, "regression.txt"), "\n".join(texts)),
    ]


def stats_odds(config: ToolConfig, records) -> List[Path]:
    def one(sc, subset):
        table = contingency(subset, config.lambda_threshold(sc), sc)
        try:
            result = odds_analysis(table).to_dict()
        except OddsRatioUndefinedError as exc:
            exc.payload = {"table": table.to_dict(), "fisher_p": exc.fisher_p}
            raise
        return {"table": table.to_dict(), **result}

    results = _per_class(records, one)
    _all_failed(results, "odds analysis")
    return [write_json(_out(config, "odds.json"), results)]


def _kde_series(config: ToolConfig, records):
    series = []
    for sc in SIZE_CLASSES:
        thetas = [r.theta for r in records if r.size_class is sc]
        if not thetas:
            continue
        est = AngleKDE(bandwidth=config.kde_bandwidth, grid_size=config.kde_grid,
                       circular=config.kde_circular).fit(thetas)
        xs, ys = est.grid()
        series.append((sc.value, list(zip(xs.tolist(), ys.tolist()))))
    if not series:
        raise StatisticsError("no change records to estimate a direction density from")
    return series


def stats_kde(config: ToolConfig, records) -> List[Path]:
    return [
        write_csv(_out(config, f"kde_{name}.csv"), ["angle", "density"], points)
        for name, points in _kde_series(config, records)
    ]


def _unique_by_gav(records):
    seen = {}
    for r in records:
        seen.setdefault(r.gav, r)
    return list(seen.values())


def stats_correlation(config: ToolConfig, records) -> List[Path]:
    groups = {"all": _unique_by_gav(records)}
    for sc in SIZE_CLASSES:
        groups[sc.value] = [r for r in groups["all"] if r.size_class is sc]
    results = {}
    for name, subset in groups.items():
        usable = [r for r in subset if r.lambda_dir > 0]
        try:
            res = pearson_log([r.lambda_dir for r in usable], [r.own_loc for r in usable])
            results[name] = {"r": res.r, "p_value": res.p_value, "n": res.n}
        except StatisticsError as exc:
            results[name] = {"error": str(exc)}
        results[name]["excluded_zero_lambda"] = len(subset) - len(usable)
    _all_failed(results, "correlation")
    return [write_json(_out(config, "correlation.json"), results)]


def stats_payoff(config: ToolConfig, records) -> List[Path]:
    betas = {}
    if config.payoff_beta is not None:
        betas = {"given": config.payoff_beta}
    else:
        for sc in SIZE_CLASSES:
            try:
                _, res = _fit(sc, [r for r in records if r.size_class is sc])
                betas[sc.value] = res.coefficient("log_lambda_dir")
            except StatisticsError as exc:
                log.warning("no leverage coefficient for %s: %s", sc.value, exc)
        if not betas:
            raise StatisticsError("payoff needs a fitted leverage coefficient; none could be estimated")
    rows = [(name, lam, beta, payoff_ratio(lam, beta))
            for name, beta in betas.items() for lam in config.payoff_lambdas]
    return [
        write_json(_out(config, "payoff.json"), [
            {"source": n, "Lambda": lam, "beta": b, "ratio": r} for n, lam, b, r in rows
        ]),
        write_csv(_out(config, "payoff.csv"), ["source", "Lambda", "beta", "ratio"], rows),
    ]


STATS: Dict[str, Callable] = {
    "regress": stats_regress,
    "odds": stats_odds,
    "kde": stats_kde,
    "correlation": stats_correlation,
    "payoff": stats_payoff,
}


def cmd_stats(config: ToolConfig, which: str = "all") -> List[Path]:
    records = read_changes(_out(config, "changes.csv"))
    kinds = STATS_KINDS if which == "all" else (which,)
    written, failures = [], []
    for kind in kinds:
        try:
            written.extend(STATS[kind](config, records))
        except StatisticsError as exc:
            if len(kinds) == 1:
                raise
            failures.append(f"{kind}: {exc}")
    if failures:
        raise StatisticsError("; ".join(failures))
    return written


# plot --------------------------------------------------------------------

def plot_kde_theta(config: ToolConfig):
    try:
        series = _kde_series(config, read_changes(_out(config, "changes.csv")))
    except StatisticsError as exc:
        raise CorpusError(str(exc)) from exc
    svg = line_chart_svg("Change direction density", "theta (degrees)", "density", series,
                         deterministic=config.deterministic)
    rows = [(name, x, y) for name, pts in series for x, y in pts]
    return svg, ["size_class", "angle", "density"], rows


def plot_leverage_scatter(config: ToolConfig):
    instances = read_instances(_out(config, "instances.csv"))
    series, rows = [], []
    for sc in SIZE_CLASSES:
        pts = []
        for inst in instances:
            if size_class(inst.own_loc, config.size_class_threshold) is not sc or inst.dep_loc == 0:
                continue
            pts.append((inst.own_loc / 1000.0, inst.lambda_dir))
            rows.append((sc.value, inst.gav, inst.own_loc / 1000.0, inst.lambda_dir))
        series.append((sc.value, pts))
    svg = scatter_svg("Direct leverage vs own size", "own size (KLoC, log)", "direct leverage (log)",
                      series, log_x=True, log_y=True, deterministic=config.deterministic)
    return svg, ["size_class", "gav", "own_kloc", "lambda_dir"], rows


def plot_max_lev_vulns(config: ToolConfig):
    points = [p for p in max_leverage_by_vuln_count(read_changes(_out(config, "changes.csv")))]
    series = [("max direct leverage per library", [(p.n_vulns, p.max_lambda_dir) for p in points])]
    svg = scatter_svg("Max direct leverage per library vs vulnerabilities", "number of vulnerabilities",
                      "max direct leverage (log)", series, log_y=True,
                      deterministic=config.deterministic, hline=config.lambda_threshold_small)
    return svg, ["ga", "n_vulns", "max_lambda_dir"], [tuple(p) for p in points]


PLOTS = {
    "kde_theta": plot_kde_theta,
    "leverage_scatter": plot_leverage_scatter,
    "max_lev_vulns": plot_max_lev_vulns,
}


def cmd_plot(config: ToolConfig, kind: str = "all") -> List[Path]:
    kinds = PLOT_KINDS if kind == "all" else (kind,)
    rendered = []
    for k in kinds:
        try:
            rendered.append((k, *PLOTS[k](config)))
        except ValueError as exc:
            raise CorpusError(f"{k}: {exc}") from exc
    written = []
    for k, svg, columns, rows in rendered:
        written.append(write_csv(_out(config, f"{k}.csv"), columns, rows))
        written.append(atomic_write_text(_out(config, f"{k}.svg"), svg))
    return written


def cmd_all(config: ToolConfig) -> List[Path]:
    written = cmd_measure(config)
    written += cmd_analyze(config)
    stats_error = None
    try:
        written += cmd_stats(config, "all")
    except StatisticsError as exc:
        stats_error = exc
    written += cmd_plot(config, "all")
    if stats_error is not None:
        raise stats_error
    return written
