"""Command line entry point: ``techlev {measure,analyze,stats,plot,all}``.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 statistical
precondition failure (details as JSON on stderr).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import pipeline
from .config import load_config
from .exceptions import ChainOrderError, ConfigError, CorpusError, FetchError, StatisticsError

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_STATS = 0, 2, 3, 4


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--config", metavar="PATH", default=default, help="JSON configuration file")
    parser.add_argument("--output", metavar="DIR", default=default, help="output directory")
    parser.add_argument("--deterministic", action="store_true",
                        default=argparse.SUPPRESS if suppress else False,
                        help="suppress timestamps so reruns are byte-identical")
    parser.add_argument("--jobs", metavar="N", type=int, default=default, help="worker threads for LoC counting")
    parser.add_argument("-v", "--verbose", action="store_true",
                        default=argparse.SUPPRESS if suppress else False)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="techlev", description=__doc__.splitlines()[0])
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="verb", required=True)

    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)

    m = sub.add_parser("measure", parents=[common], help="count LoC, resolve deps, annotate vulnerabilities")
    m.add_argument("--manifest", metavar="PATH")
    m.add_argument("--vuln-db", metavar="PATH")

    sub.add_parser("analyze", parents=[common], help="split release chains and compute change records")

    s = sub.add_parser("stats", parents=[common], help="statistical analyses over changes.csv")
    s.add_argument("which", nargs="?", default="all", choices=[*pipeline.STATS_KINDS, "all"])
    s.add_argument("--beta", type=float, help="leverage coefficient for payoff instead of fitting one")

    p = sub.add_parser("plot", parents=[common], help="render SVG figures and their data")
    p.add_argument("kind", nargs="?", default="all", choices=[*pipeline.PLOT_KINDS, "all"])

    a = sub.add_parser("all", parents=[common], help="measure, analyze, stats and plot")
    a.add_argument("--manifest", metavar="PATH")
    a.add_argument("--vuln-db", metavar="PATH")
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    overrides = {
        "output_dir": args.output,
        "jobs": args.jobs,
        "manifest_path": getattr(args, "manifest", None),
        "vuln_db_path": getattr(args, "vuln_db", None),
        "payoff_beta": getattr(args, "beta", None),
    }
    if args.deterministic:
        overrides["deterministic"] = True
    try:
        config = load_config(args.config, overrides=overrides)
        if args.verb == "measure":
            written = pipeline.cmd_measure(config)
        elif args.verb == "analyze":
            written = pipeline.cmd_analyze(config)
        elif args.verb == "stats":
            written = pipeline.cmd_stats(config, args.which)
        elif args.verb == "plot":
            written = pipeline.cmd_plot(config, args.kind)
        else:
            written = pipeline.cmd_all(config)
    except ConfigError as exc:
        print(f"techlev: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except StatisticsError as exc:
        print(json.dumps({"error": "statistics", "kind": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return EXIT_STATS
    except (CorpusError, ChainOrderError, FetchError, OSError) as exc:
        print(f"techlev: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    for path in written:
        print(path)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
