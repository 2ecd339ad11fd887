"""Command-line interface.

Subcommands: ingest, series, trends, network, terms, all. Settings come
from a plain-text config file plus flag overrides (flags win); the
TOPICTRACE_OUTPUT environment variable overrides the output directory.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from .chronology import YearRange
from .config import build_config
from .errors import ConfigError
from .pipeline import EXIT_CONFIG, run

# flag destination -> config key
_FLAG_KEYS = {
    "input": "input_path",
    "format": "input_format",
    "field_map": "field_map",
    "topic": "topic",
    "topic_b": "topic_b",
    "match_mode": "match_mode",
    "event_year": "event_year",
    "cycle": "cycle",
    "start_year": "start_year",
    "end_year": "end_year",
    "min_prominence": "min_prominence",
    "trend_quantile": "trend_quantile",
    "window_len": "window_len",
    "window_step": "window_step",
    "clustering": "clustering",
    "kc": "k_c",
    "percentile": "percentile",
    "top_n": "top_n",
    "min_freq": "min_freq",
    "term_source": "term_source",
    "tagger": "tagger",
    "pretagged_titles": "pretagged_titles",
    "pretagged_abstracts": "pretagged_abstracts",
    "region_map": "region_map",
    "workers": "workers",
    "out": "output_dir",
}


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-c", "--config", help="path to key = value config file")
    common.add_argument("--input", help="input corpus file")
    common.add_argument("--format", choices=["jsonl", "csv"], help="input format")
    common.add_argument("--field-map", dest="field_map",
                        help="input:schema field renames, comma separated")
    common.add_argument("--topic", help="topic query: spellings a|b, clauses &")
    common.add_argument("--topic-b", dest="topic_b",
                        help="second topic for the joint series ('' disables)")
    common.add_argument("--match-mode", dest="match_mode",
                        choices=["substring", "word"])
    common.add_argument("--event-year", dest="event_year", type=int)
    common.add_argument("--cycle", type=int, help="anniversary cycle in years")
    common.add_argument("--start-year", dest="start_year", type=int)
    common.add_argument("--end-year", dest="end_year", type=int,
                        help="0 selects the last year in the corpus")
    common.add_argument("--min-prominence", dest="min_prominence", type=float)
    common.add_argument("--trend-quantile", dest="trend_quantile", type=float)
    common.add_argument("--window-len", dest="window_len", type=int)
    common.add_argument("--window-step", dest="window_step", type=int)
    common.add_argument("--clustering", choices=["average_local", "transitivity"])
    common.add_argument("--kc", type=int, help="occurrence-count threshold")
    common.add_argument("--percentile", type=float)
    common.add_argument("--top-n", dest="top_n", type=int)
    common.add_argument("--min-freq", dest="min_freq", type=int)
    common.add_argument("--term-source", dest="term_source",
                        choices=["titles", "abstracts", "both"])
    common.add_argument("--tagger", choices=["baseline", "pretagged"])
    common.add_argument("--pretagged-titles", dest="pretagged_titles")
    common.add_argument("--pretagged-abstracts", dest="pretagged_abstracts")
    common.add_argument("--region-map", dest="region_map",
                        help="two-column CSV country,region")
    common.add_argument("--workers", type=int)
    common.add_argument("--out", help="output directory")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="topictrace",
        description="Quantify the evolution of an event-triggered research topic "
                    "from bibliographic records.")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, text in [
        ("ingest", "parse and validate the corpus"),
        ("series", "annual counts, peaks, adoption and joint-topic series"),
        ("trends", "per-discipline trend fits and ranking"),
        ("network", "country co-authorship network and metrics"),
        ("terms", "semantic-unit extraction, scoring and selection"),
        ("all", "run every step"),
    ]:
        sub = subparsers.add_parser(name, parents=[common], help=text)
        if name == "network":
            sub.add_argument("--window",
                             help="explicit window START:END instead of the "
                                  "sliding windows")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    overrides = {}
    for flag, key in _FLAG_KEYS.items():
        value = getattr(args, flag, None)
        if value is not None:
            overrides[key] = str(value)
    try:
        cfg = build_config(file_path=args.config, overrides=overrides,
                           env=dict(os.environ))
    except (ConfigError, OSError) as err:
        print(f"topictrace: {err}", file=sys.stderr)
        return EXIT_CONFIG

    window = None
    raw_window = getattr(args, "window", None)
    if raw_window:
        try:
            window = YearRange.parse(raw_window)
        except ValueError as err:
            print(f"topictrace: --window: {err}", file=sys.stderr)
            return EXIT_CONFIG

    return run(args.command, cfg, window=window)


if __name__ == "__main__":
    sys.exit(main())
