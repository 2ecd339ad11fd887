"""Pipeline orchestration: load, analyze, and write deterministic reports.

Every subcommand writes plain CSV/JSON data files into the output
directory; identical configuration and input produce byte-identical
output trees regardless of worker count. Per-item analysis problems are
collected as warnings instead of aborting the run.
"""

from __future__ import annotations

import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from importlib import resources
from pathlib import Path

from . import chronology, corpus as corpus_mod, disciplines, network, terms
from .config import PipelineConfig
from .corpus import Corpus, TopicQuery
from .errors import (
    AnalysisError,
    IngestError,
    TermSelectionError,
    ZipfFitError,
)
from .tagging import RuleTagger, read_pretagged
from .terms import DocumentUnits, SemanticUnit

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CONFIG = 3

COMMANDS = ("ingest", "series", "trends", "network", "terms", "all")


def _write_json(path: Path, payload) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


def _load_region_map(cfg: PipelineConfig) -> dict[str, str]:
    if cfg.region_map:
        return chronology.load_region_map(cfg.region_map)
    bundled = resources.files("topictrace").joinpath("data/regions.csv")
    with bundled.open("r", encoding="utf-8") as handle:
        return chronology.load_region_map(handle)


def _topic_query(cfg: PipelineConfig) -> TopicQuery:
    return TopicQuery.from_string(cfg.topic, word_boundary=cfg.match_mode == "word")


def _analysis_bounds(cfg: PipelineConfig, topical: Corpus) -> chronology.YearRange:
    end = cfg.end_year
    if not end:
        span = topical.year_span()
        end = span[1] if span else cfg.start_year
    end = max(end, cfg.start_year)
    return chronology.YearRange(cfg.start_year, end)


# -- term extraction -------------------------------------------------------

_worker_tagger: RuleTagger | None = None


def _init_worker() -> None:
    global _worker_tagger
    _worker_tagger = RuleTagger()


def _extract_one(text: str):
    global _worker_tagger
    if _worker_tagger is None:
        _worker_tagger = RuleTagger()
    try:
        return terms.extract_semantic_units(text, _worker_tagger), None
    except Exception as err:  # tagger contract failure: skip the document
        return None, str(err)


def _extract_many(texts: list[str], workers: int):
    if workers > 1 and len(texts) > 1:
        chunk = max(1, len(texts) // (workers * 8))
        with ProcessPoolExecutor(max_workers=workers,
                                 initializer=_init_worker) as pool:
            return list(pool.map(_extract_one, texts, chunksize=chunk))
    return [_extract_one(text) for text in texts]


def _source_text(record, source: str) -> str:
    if source == "titles":
        return record.title
    return record.abstract or ""


def _units_per_record(analysis: Corpus, source: str, cfg: PipelineConfig,
                      warnings: list[str]) -> list[frozenset[SemanticUnit]]:
    """One unit set per analysis-corpus record, in corpus order."""
    if cfg.tagger == "pretagged":
        path = cfg.pretagged_titles if source == "titles" else cfg.pretagged_abstracts
        if not path:
            raise IngestError(f"no pretagged file configured for {source}")
        blocks = read_pretagged(path)
        if len(blocks) != len(analysis):
            raise IngestError(
                f"pretagged {source} has {len(blocks)} documents, "
                f"corpus has {len(analysis)}")
        return [frozenset(terms.units_from_tokens(block)) for block in blocks]
    texts = [_source_text(record, source) for record in analysis]
    results = _extract_many(texts, cfg.workers)
    unit_sets = []
    for record, (units, error) in zip(analysis, results):
        if error is not None:
            warnings.append(f"terms: tagger failed on {record.id}: {error}")
            unit_sets.append(frozenset())
        else:
            unit_sets.append(frozenset(units))
    return unit_sets


def _mine_source(analysis: Corpus, source: str, cfg: PipelineConfig,
                 out: Path, warnings: list[str]) -> tuple[list[frozenset[SemanticUnit]],
                                                          list[SemanticUnit]]:
    """Run the full term pipeline for one text source; returns per-record
    unit sets and the selected term list."""
    unit_sets = _units_per_record(analysis, source, cfg, warnings)
    documents = []
    for record, units in zip(analysis, unit_sets):
        if not record.disciplines or not units:
            continue
        if source == "abstracts" and record.abstract is None:
            continue
        documents.append(DocumentUnits(record.id, record.year,
                                       record.disciplines, units))
    table = terms.count_occurrences(documents)

    if table.stats:
        terms.write_survivor_csv(terms.survivor_curve(table), out / f"survivor_{source}.csv")
    else:
        warnings.append(f"terms: no units extracted from {source}")
        terms.write_survivor_csv([], out / f"survivor_{source}.csv")

    try:
        fit = terms.fit_zipf(terms.frequency_rank(table), min_freq=cfg.min_freq)
        _write_json(out / f"zipf_{source}.json", {
            "exponent": fit.exponent,
            "r_squared": fit.r_squared,
            "n_points": fit.n_points,
            "min_freq": cfg.min_freq,
        })
    except ZipfFitError as err:
        warnings.append(f"terms: zipf fit failed for {source}: {err}")

    selected: list[terms.TermScore] = []
    kept = table.threshold(cfg.k_c)
    if kept.stats:
        try:
            priors = terms.discipline_priors(kept)
            _write_json(out / f"priors_{source}.json", priors)
            selected = terms.select_terms(kept, percentile=cfg.percentile,
                                          top_n=cfg.top_n, priors=priors)
            selected = terms.annotate_terms(selected, kept, priors)
            if not selected:
                warnings.append(f"terms: empty selection for {source} "
                                "(no unit above the termhood percentile)")
            elif len(selected) < cfg.top_n:
                warnings.append(f"terms: {source} selection has "
                                f"{len(selected)} of {cfg.top_n} requested rows")
        except (TermSelectionError, AnalysisError) as err:
            warnings.append(f"terms: selection failed for {source}: {err}")
    else:
        warnings.append(
            f"terms: no units above k_c={cfg.k_c} for {source}")
    terms.write_term_report(selected, out / f"terms_{source}.csv")
    return unit_sets, [ts.unit for ts in selected]


def run_terms(analysis: Corpus, cfg: PipelineConfig, out: Path,
              warnings: list[str]) -> None:
    sources = ["titles", "abstracts"] if cfg.term_source == "both" else [cfg.term_source]
    per_source_sets: list[list[frozenset[SemanticUnit]]] = []
    all_selected: set[SemanticUnit] = set()
    for source in sources:
        unit_sets, selected = _mine_source(analysis, source, cfg, out, warnings)
        per_source_sets.append(unit_sets)
        all_selected.update(selected)
    # Title and abstract of one record form a single co-occurrence document.
    combined = [frozenset().union(*sets) for sets in zip(*per_source_sets)]
    matrix = terms.cooccurrence_matrix(combined, all_selected)
    terms.write_cooccurrence_csv(matrix, out / "cooccurrence.csv")


# -- other subcommands ------------------------------------------------------

def run_ingest(parsed: corpus_mod.ParseResult, out: Path) -> None:
    corpus_mod.write_jsonl(parsed.corpus, out / "corpus.jsonl")
    corpus_mod.write_rejects(parsed.rejects, out / "rejects.jsonl")
    _write_json(out / "validation.json",
                corpus_mod.validate(parsed.corpus).to_dict())


def run_series(analysis: Corpus, cfg: PipelineConfig, bounds: chronology.YearRange,
               out: Path, warnings: list[str]) -> None:
    series = chronology.annual_counts(analysis, bounds)
    chronology.write_series_csv(series, out / "annual_counts.csv")
    _write_json(out / "annual_counts.json", chronology.series_to_dict(series))

    peaks_payload: dict = {
        "event_year": cfg.event_year,
        "cycle": cfg.cycle,
        "min_prominence": cfg.min_prominence,
        "peaks": [],
        "anniversaries": [],
    }
    if len(series.counts) >= 3:
        peaks = chronology.detect_peaks(series, cfg.min_prominence)
        aligned = chronology.anniversary_alignment(peaks, cfg.event_year, cfg.cycle)
        peaks_payload["peaks"] = [
            {"year": p.year, "value": p.value,
             "prominence": None if math.isinf(p.prominence) else p.prominence}
            for p in peaks
        ]
        peaks_payload["anniversaries"] = [
            {"year": p.year, "k": k} for p, k in aligned
        ]
    else:
        warnings.append("series: span too short for peak detection")
    _write_json(out / "peaks.json", peaks_payload)

    regions = chronology.cumulative_countries(analysis, _load_region_map(cfg),
                                              years=bounds)
    lines = [",".join(["year"] + sorted(regions))]
    for offset, year in enumerate(bounds.years()):
        cells = [str(regions[r].counts[offset]) for r in sorted(regions)]
        lines.append(",".join([str(year)] + cells))
    (out / "cumulative_countries.csv").write_text("\n".join(lines) + "\n",
                                                  encoding="utf-8")
    _write_json(out / "cumulative_countries.json",
                {r: chronology.series_to_dict(s) for r, s in regions.items()})

    if cfg.topic_b.strip():
        joint = chronology.joint_topic_series(
            analysis, _topic_query(cfg),
            TopicQuery.from_string(cfg.topic_b,
                                   word_boundary=cfg.match_mode == "word"),
            bounds)
        lines = ["year,topic_a,topic_b,both"]
        for offset, year in enumerate(bounds.years()):
            lines.append(f"{year},{joint.a.counts[offset]},"
                         f"{joint.b.counts[offset]},{joint.a_and_b.counts[offset]}")
        (out / "joint_topics.csv").write_text("\n".join(lines) + "\n",
                                              encoding="utf-8")
        _write_json(out / "joint_topics.json", {
            "a": chronology.series_to_dict(joint.a),
            "b": chronology.series_to_dict(joint.b),
            "a_and_b": chronology.series_to_dict(joint.a_and_b),
        })


def run_trends(analysis: Corpus, cfg: PipelineConfig, bounds: chronology.YearRange,
               out: Path, warnings: list[str]) -> None:
    series = disciplines.discipline_series(analysis, bounds)
    fits, skipped = disciplines.fit_all_trends(series)
    for label in skipped:
        warnings.append(f"trends: undefined trend for {label!r} "
                        "(fewer than 2 nonzero years)")
    selected = disciplines.rank_trends(fits, cfg.trend_quantile) if fits else []
    disciplines.write_trend_report(fits, selected, out / "trends.csv")


def run_network(analysis: Corpus, cfg: PipelineConfig, bounds: chronology.YearRange,
                out: Path, warnings: list[str],
                window: chronology.YearRange | None = None) -> None:
    target = window if window is not None else bounds
    graph = network.build_network(analysis, target)
    suffix = f"_{target.label()}" if window is not None else ""
    (out / f"network{suffix}.net").write_text(network.export_pajek(graph),
                                              encoding="utf-8")
    metrics = network.network_metrics(graph, clustering=cfg.clustering)
    payload = {"window": target.label(), "metrics": metrics.to_dict()}
    _write_json(out / f"network_metrics{suffix}.json", payload)
    if metrics.n_nodes == 0:
        warnings.append(f"network: window {target.label()} has no countries")

    if window is None:
        windowed = network.windowed_metrics(analysis, cfg.window_len,
                                            cfg.window_step,
                                            clustering=cfg.clustering)
        _write_json(out / "windowed_metrics.json", [
            {"window": w.label(), "metrics": m.to_dict()} for w, m in windowed
        ])


def run(command: str, cfg: PipelineConfig,
        window: chronology.YearRange | None = None) -> int:
    """Execute one subcommand; returns the process exit code."""
    if command not in COMMANDS:
        raise ValueError(f"unknown command: {command}")
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)

    try:
        cfg.validate()
        field_map = cfg.parsed_field_map()
    except Exception as err:
        log.error("configuration error: %s", err)
        _write_json(out / "error.json", {"error": str(err), "exit_code": EXIT_CONFIG})
        return EXIT_CONFIG

    try:
        parsed = corpus_mod.parse_records(cfg.input_path, format=cfg.input_format,
                                          field_map=field_map,
                                          source=Path(cfg.input_path).stem)
    except (OSError, IngestError) as err:
        log.error("input error: %s", err)
        _write_json(out / "error.json", {"error": str(err), "exit_code": EXIT_INPUT})
        return EXIT_INPUT

    warnings: list[str] = []
    topical = corpus_mod.filter_topic(parsed.corpus, _topic_query(cfg))
    bounds = _analysis_bounds(cfg, topical)
    analysis = corpus_mod.filter_years(topical, bounds.start, bounds.end)
    if not len(analysis):
        warnings.append("analysis corpus is empty after topic/year filtering")

    try:
        if command in ("ingest", "all"):
            run_ingest(parsed, out)
        if command in ("series", "all"):
            run_series(analysis, cfg, bounds, out, warnings)
        if command in ("trends", "all"):
            run_trends(analysis, cfg, bounds, out, warnings)
        if command in ("network", "all"):
            run_network(analysis, cfg, bounds, out, warnings, window=window)
        if command in ("terms", "all"):
            run_terms(analysis, cfg, out, warnings)
    except (OSError, IngestError) as err:
        log.error("input error: %s", err)
        _write_json(out / "error.json", {"error": str(err), "exit_code": EXIT_INPUT})
        return EXIT_INPUT

    (out / "config_used.cfg").write_text(cfg.to_text(), encoding="utf-8")
    if warnings:
        _write_json(out / "warnings.json", {"count": len(warnings),
                                            "warnings": warnings})
        for message in warnings:
            log.warning("%s", message)
    return EXIT_OK
