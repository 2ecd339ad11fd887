"""Publication time series: annual counts, peaks, anniversaries, adoption curves.

All operations are pure functions over an immutable corpus; outputs are
deterministic for a given input.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Mapping

from .corpus import Corpus, TopicQuery, canonical_label

FALLBACK_REGION = "other"


@dataclass(frozen=True)
class YearRange:
    """Inclusive interval of calendar years."""

    start: int
    end: int

    def __post_init__(self):
        if self.end < self.start:
            raise ValueError(f"empty year range: {self.start}..{self.end}")

    def years(self) -> range:
        return range(self.start, self.end + 1)

    def __len__(self) -> int:
        return self.end - self.start + 1

    def __contains__(self, year: int) -> bool:
        return self.start <= year <= self.end

    def label(self) -> str:
        return f"{self.start}-{self.end}"

    @classmethod
    def parse(cls, text: str) -> "YearRange":
        """Parse ``1986:1991`` (or ``1986-1991``) into a range."""
        sep = ":" if ":" in text else "-"
        start, _, end = text.partition(sep)
        return cls(int(start), int(end))


@dataclass(frozen=True)
class AnnualSeries:
    """Per-year counts over an inclusive year range."""

    start_year: int
    end_year: int
    counts: tuple[int, ...]

    def __post_init__(self):
        expected = self.end_year - self.start_year + 1
        if expected < 1:
            raise ValueError("empty year range")
        if len(self.counts) != expected:
            raise ValueError(
                f"counts length {len(self.counts)} != {expected} years")
        if any(c < 0 for c in self.counts):
            raise ValueError("counts must be non-negative")
        object.__setattr__(self, "counts", tuple(self.counts))

    def get(self, year: int) -> int:
        if not self.start_year <= year <= self.end_year:
            raise KeyError(year)
        return self.counts[year - self.start_year]

    def items(self) -> Iterator[tuple[int, int]]:
        for offset, count in enumerate(self.counts):
            yield self.start_year + offset, count

    def total(self) -> int:
        return sum(self.counts)


@dataclass(frozen=True)
class PeakEvent:
    """A year whose count strictly exceeds both neighbors.

    Prominence is the ratio of the peak count to the larger neighbor
    (infinite when both neighbors are zero).
    """

    year: int
    value: int
    prominence: float


@dataclass(frozen=True)
class JointTopicSeries:
    """Annual counts for two topics and their intersection."""

    a: AnnualSeries
    b: AnnualSeries
    a_and_b: AnnualSeries


def annual_counts(corpus: Corpus, years: YearRange) -> AnnualSeries:
    """Tally records per year; records outside the range are ignored."""
    counts = [0] * len(years)
    for record in corpus:
        if record.year in years:
            counts[record.year - years.start] += 1
    return AnnualSeries(years.start, years.end, tuple(counts))


def detect_peaks(series: AnnualSeries, min_prominence: float = 1.2) -> list[PeakEvent]:
    """Strict local maxima with prominence >= min_prominence, ascending by year.

    Endpoint years are never peaks (one-sided evidence only).
    """
    if len(series.counts) < 3:
        raise ValueError("peak detection needs a series of at least 3 years")
    if min_prominence < 1:
        raise ValueError("min_prominence must be >= 1")
    peaks = []
    counts = series.counts
    for i in range(1, len(counts) - 1):
        value = counts[i]
        neighbor = max(counts[i - 1], counts[i + 1])
        if value > counts[i - 1] and value > counts[i + 1]:
            prominence = value / neighbor if neighbor else math.inf
            if prominence >= min_prominence:
                peaks.append(PeakEvent(series.start_year + i, value, prominence))
    return peaks


def anniversary_alignment(peaks: Iterable[PeakEvent], event_year: int,
                          cycle: int = 5) -> list[tuple[PeakEvent, int]]:
    """Keep peaks landing on positive multiples of the cycle after the event.

    Returns (peak, k) pairs with k = (peak year - event year) / cycle.
    """
    if cycle < 1:
        raise ValueError("cycle must be >= 1")
    aligned = []
    for peak in peaks:
        offset = peak.year - event_year
        if offset > 0 and offset % cycle == 0:
            aligned.append((peak, offset // cycle))
    return aligned


def cumulative_countries(corpus: Corpus, region_map: Mapping[str, str],
                         years: YearRange | None = None) -> dict[str, AnnualSeries]:
    """Cumulative count of distinct countries per region, year by year.

    A country counts toward year y once any record with year <= y mentions
    it. Countries missing from the region map fall into region "other".
    The range defaults to the corpus year span.
    """
    if years is None:
        span = corpus.year_span()
        if span is None:
            return {}
        years = YearRange(*span)
    first_seen: dict[str, int] = {}
    for record in corpus:
        for country in record.countries:
            prev = first_seen.get(country)
            if prev is None or record.year < prev:
                first_seen[country] = record.year
    by_region: dict[str, list[int]] = {}
    for country, first_year in first_seen.items():
        region = region_map.get(country, FALLBACK_REGION)
        by_region.setdefault(region, []).append(first_year)
    result = {}
    for region in sorted(by_region):
        firsts = by_region[region]
        counts = tuple(sum(1 for f in firsts if f <= y) for y in years.years())
        result[region] = AnnualSeries(years.start, years.end, counts)
    return result


def joint_topic_series(corpus: Corpus, query_a: TopicQuery, query_b: TopicQuery,
                       years: YearRange) -> JointTopicSeries:
    """Annual series for topic A, topic B, and records matching both."""
    a = [0] * len(years)
    b = [0] * len(years)
    both = [0] * len(years)
    for record in corpus:
        if record.year not in years:
            continue
        i = record.year - years.start
        hit_a = query_a.matches(record)
        hit_b = query_b.matches(record)
        if hit_a:
            a[i] += 1
        if hit_b:
            b[i] += 1
        if hit_a and hit_b:
            both[i] += 1
    return JointTopicSeries(
        a=AnnualSeries(years.start, years.end, tuple(a)),
        b=AnnualSeries(years.start, years.end, tuple(b)),
        a_and_b=AnnualSeries(years.start, years.end, tuple(both)),
    )


def load_region_map(source) -> dict[str, str]:
    """Read a two-column CSV (country, region) into a canonicalized mapping.

    A leading ``country,region`` header row is skipped if present. Country
    keys are canonicalized the same way record countries are.
    """
    if isinstance(source, (str, Path)):
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = source.read()
    mapping: dict[str, str] = {}
    for row in csv.reader(io.StringIO(text)):
        if not row or not any(cell.strip() for cell in row):
            continue
        if len(row) < 2:
            raise ValueError(f"region map rows need 2 columns, got {row!r}")
        country, region = row[0].strip(), row[1].strip()
        if country.casefold() == "country" and region.casefold() == "region":
            continue
        mapping[canonical_label(country)] = region
    return mapping


def series_to_dict(series: AnnualSeries) -> dict:
    return {
        "start_year": series.start_year,
        "end_year": series.end_year,
        "counts": {str(year): count for year, count in series.items()},
    }


def write_series_csv(series: AnnualSeries, target, value_column: str = "count") -> None:
    lines = [f"year,{value_column}"]
    lines.extend(f"{year},{count}" for year, count in series.items())
    text = "\n".join(lines) + "\n"
    if isinstance(target, (str, Path)):
        Path(target).write_text(text, encoding="utf-8")
    else:
        target.write(text)
