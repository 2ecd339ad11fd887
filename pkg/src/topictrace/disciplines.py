"""Per-discipline publication series and normalized linear trends.

A record with m discipline labels counts once in each of the m series
(multi-label counting, no fractionalization). Trends are ordinary least
squares over the years with at least one publication, on counts normalized
by the discipline's total, so the slope is scale-invariant.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from pathlib import Path

from .chronology import AnnualSeries, YearRange
from .corpus import Corpus
from .errors import TrendUndefinedError


@dataclass(frozen=True)
class TrendFit:
    """Linear trend of a discipline's normalized annual share."""

    discipline: str
    slope: float
    intercept: float
    n_points: int
    total_docs: int


def discipline_series(corpus: Corpus, years: YearRange) -> dict[str, AnnualSeries]:
    """Annual counts per discipline label, sorted by label."""
    tallies: dict[str, list[int]] = {}
    n = len(years)
    for record in corpus:
        if record.year not in years:
            continue
        offset = record.year - years.start
        for discipline in record.disciplines:
            counts = tallies.setdefault(discipline, [0] * n)
            counts[offset] += 1
    return {
        label: AnnualSeries(years.start, years.end, tuple(tallies[label]))
        for label in sorted(tallies)
    }


def trend_fit(series: AnnualSeries, discipline: str = "") -> TrendFit:
    """Least-squares line through the nonzero years of a normalized series.

    Points are (year - first nonzero year, count / total). Years with zero
    publications are left out entirely; fewer than two nonzero years raises
    TrendUndefinedError.
    """
    nonzero = [(year, count) for year, count in series.items() if count > 0]
    if len(nonzero) < 2:
        raise TrendUndefinedError(
            f"trend needs >= 2 nonzero years, got {len(nonzero)}")
    total = sum(count for _, count in nonzero)
    origin = nonzero[0][0]
    xs = [float(year - origin) for year, _ in nonzero]
    ys = [count / total for _, count in nonzero]
    slope, intercept = statistics.linear_regression(xs, ys)
    return TrendFit(
        discipline=discipline,
        slope=slope,
        intercept=intercept,
        n_points=len(nonzero),
        total_docs=total,
    )


def fit_all_trends(series_by_discipline: dict[str, AnnualSeries],
                   min_points: int = 2) -> tuple[list[TrendFit], list[str]]:
    """Fit every discipline; returns (fits, labels skipped as undefined)."""
    fits: list[TrendFit] = []
    skipped: list[str] = []
    for label in sorted(series_by_discipline):
        series = series_by_discipline[label]
        try:
            fit = trend_fit(series, discipline=label)
        except TrendUndefinedError:
            skipped.append(label)
            continue
        if fit.n_points >= min_points:
            fits.append(fit)
    return fits, skipped


def rank_trends(fits: list[TrendFit], quantile: float) -> list[TrendFit]:
    """Top ceil(quantile * N) fits by |slope| descending, label as tie-break."""
    if not 0 < quantile <= 1:
        raise ValueError("quantile must be in (0, 1]")
    ordered = sorted(fits, key=lambda f: (-abs(f.slope), f.discipline))
    keep = math.ceil(quantile * len(ordered))
    return ordered[:keep]


def write_trend_report(fits: list[TrendFit], selected: list[TrendFit], target) -> None:
    """CSV report of all fits with a flag marking the ranked selection."""
    chosen = {fit.discipline for fit in selected}
    lines = ["discipline,slope,intercept,n_points,total_docs,selected"]
    for fit in sorted(fits, key=lambda f: f.discipline):
        lines.append(
            f"{fit.discipline},{fit.slope:.12g},{fit.intercept:.12g},"
            f"{fit.n_points},{fit.total_docs},{int(fit.discipline in chosen)}")
    text = "\n".join(lines) + "\n"
    if isinstance(target, (str, Path)):
        Path(target).write_text(text, encoding="utf-8")
    else:
        target.write(text)
