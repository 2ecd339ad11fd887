"""topictrace: quantify the evolution of an event-triggered research topic.

Library + CLI over bibliographic records: publication time series and
anniversary peaks, per-discipline trends, country co-authorship networks,
and noun-phrase term extraction with specificity scoring.
"""

from .chronology import (
    AnnualSeries,
    JointTopicSeries,
    PeakEvent,
    YearRange,
    annual_counts,
    anniversary_alignment,
    cumulative_countries,
    detect_peaks,
    joint_topic_series,
    load_region_map,
)
from .corpus import (
    Corpus,
    PubRecord,
    TopicQuery,
    ValidationReport,
    filter_topic,
    filter_years,
    parse_records,
    validate,
    write_jsonl,
)
from .disciplines import TrendFit, discipline_series, fit_all_trends, rank_trends, trend_fit
from .network import (
    CountryGraph,
    NetworkMetrics,
    build_network,
    export_pajek,
    network_metrics,
    parse_pajek,
    windowed_metrics,
)
from .tagging import RuleTagger, TaggedToken, read_pretagged
from .terms import (
    DocumentUnits,
    OccurrenceTable,
    SemanticUnit,
    TermScore,
    ZipfFit,
    annotate_terms,
    cooccurrence_matrix,
    count_occurrences,
    discipline_priors,
    extract_semantic_units,
    fit_zipf,
    frequency_rank,
    select_terms,
    survivor_curve,
    termhood,
    units_from_tokens,
)

__version__ = "0.1.0"
