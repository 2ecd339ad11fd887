"""Pipeline configuration: defaults, plain-text config files, validation.

Configuration is a flat ``key = value`` file; command-line flags override
file values, and the effective configuration is echoed into the output
directory so a run can be reproduced from it alone.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ConfigError

DEFAULT_TOPIC = "chornobyl|chornobyl'|chernobyl|chernobyl'"

TAGGERS = ("baseline", "pretagged")
FORMATS = ("jsonl", "csv")
TERM_SOURCES = ("titles", "abstracts", "both")
MATCH_MODES = ("substring", "word")
CLUSTERING_MODES = ("average_local", "transitivity")

#: Environment variable that overrides the output directory.
OUTPUT_ENV_VAR = "TOPICTRACE_OUTPUT"


@dataclass
class PipelineConfig:
    input_path: str = ""
    input_format: str = "jsonl"
    field_map: str = ""            # in_name:schema_name pairs, comma separated
    topic: str = DEFAULT_TOPIC     # spellings split on |, clauses on &
    topic_b: str = "fukushima"     # second topic for the joint series ("" = skip)
    match_mode: str = "substring"
    event_year: int = 1986
    cycle: int = 5
    start_year: int = 1986
    end_year: int = 0              # 0 = last year present in the corpus
    min_prominence: float = 1.2
    trend_quantile: float = 0.25
    window_len: int = 6
    window_step: int = 6
    clustering: str = "average_local"
    k_c: int = 4
    percentile: float = 50.0
    top_n: int = 50
    min_freq: int = 2
    term_source: str = "both"
    tagger: str = "baseline"
    pretagged_titles: str = ""
    pretagged_abstracts: str = ""
    region_map: str = ""           # path; "" = bundled continental map
    workers: int = 1
    output_dir: str = "out"

    def validate(self) -> None:
        if not self.input_path:
            raise ConfigError("input_path", "no input file configured")
        if self.input_format not in FORMATS:
            raise ConfigError("input_format", f"must be one of {FORMATS}")
        if not self.topic.strip():
            raise ConfigError("topic", "topic query must not be empty")
        if self.match_mode not in MATCH_MODES:
            raise ConfigError("match_mode", f"must be one of {MATCH_MODES}")
        if not 1900 <= self.event_year <= 2100:
            raise ConfigError("event_year", "must be within 1900..2100")
        if self.cycle < 1:
            raise ConfigError("cycle", "must be >= 1")
        if not 1900 <= self.start_year <= 2100:
            raise ConfigError("start_year", "must be within 1900..2100")
        if self.end_year and self.end_year < self.start_year:
            raise ConfigError("end_year", "must be >= start_year (or 0 for auto)")
        if self.min_prominence < 1:
            raise ConfigError("min_prominence", "must be >= 1")
        if not 0 < self.trend_quantile <= 1:
            raise ConfigError("trend_quantile", "must be in (0, 1]")
        if self.window_len < 1:
            raise ConfigError("window_len", "must be >= 1")
        if self.window_step < 1:
            raise ConfigError("window_step", "must be >= 1")
        if self.clustering not in CLUSTERING_MODES:
            raise ConfigError("clustering", f"must be one of {CLUSTERING_MODES}")
        if self.k_c < 0:
            raise ConfigError("k_c", "must be >= 0")
        if not 0 < self.percentile <= 100:
            raise ConfigError("percentile", "must be in (0, 100]")
        if self.top_n < 1:
            raise ConfigError("top_n", "must be >= 1")
        if self.min_freq < 1:
            raise ConfigError("min_freq", "must be >= 1")
        if self.term_source not in TERM_SOURCES:
            raise ConfigError("term_source", f"must be one of {TERM_SOURCES}")
        if self.tagger not in TAGGERS:
            raise ConfigError("tagger", f"must be one of {TAGGERS}")
        if self.tagger == "pretagged" and not (
                self.pretagged_titles or self.pretagged_abstracts):
            raise ConfigError("tagger",
                              "pretagged tagger needs pretagged_titles and/or "
                              "pretagged_abstracts")
        if self.workers < 1:
            raise ConfigError("workers", "must be >= 1")
        if not self.output_dir:
            raise ConfigError("output_dir", "must not be empty")

    def parsed_field_map(self) -> dict[str, str] | None:
        if not self.field_map.strip():
            return None
        mapping = {}
        for pair in self.field_map.split(","):
            pair = pair.strip()
            if not pair:
                continue
            key, sep, value = pair.partition(":")
            if not sep or not key.strip() or not value.strip():
                raise ConfigError("field_map",
                                  f"expected in_name:schema_name, got {pair!r}")
            mapping[key.strip()] = value.strip()
        return mapping

    def to_text(self) -> str:
        lines = [f"{f.name} = {getattr(self, f.name)}" for f in fields(self)]
        return "\n".join(lines) + "\n"


def _coerce(name: str, kind: type, raw: str):
    try:
        if kind is int:
            return int(raw)
        if kind is float:
            return float(raw)
        return raw
    except ValueError:
        raise ConfigError(name, f"expected {kind.__name__}, got {raw!r}") from None


def parse_config_text(text: str) -> dict[str, str]:
    """Parse ``key = value`` lines; '#' starts a comment, blanks are skipped."""
    values: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        key, sep, value = stripped.partition("=")
        if not sep:
            raise ConfigError(f"line {lineno}", f"expected key = value, got {line!r}")
        values[key.strip()] = value.strip()
    return values


def build_config(file_path: str | Path | None = None,
                 overrides: dict[str, str] | None = None,
                 env: dict[str, str] | None = None) -> PipelineConfig:
    """Layer defaults < config file < environment < explicit overrides."""
    config = PipelineConfig()
    field_types = {f.name: f.type for f in fields(PipelineConfig)}
    kinds = {"int": int, "float": float, "str": str}

    def apply(values: dict[str, str]):
        for key, raw in values.items():
            if key not in field_types:
                raise ConfigError(key, "unknown configuration key")
            kind = kinds.get(str(field_types[key]), str)
            setattr(config, key, _coerce(key, kind, raw))

    if file_path is not None:
        apply(parse_config_text(Path(file_path).read_text(encoding="utf-8")))
    if env and env.get(OUTPUT_ENV_VAR):
        config.output_dir = env[OUTPUT_ENV_VAR]
    if overrides:
        apply(overrides)
    return config
