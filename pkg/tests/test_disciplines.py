import random

import pytest

from topictrace.chronology import AnnualSeries, YearRange
from topictrace.corpus import Corpus, PubRecord
from topictrace.disciplines import (
    discipline_series,
    fit_all_trends,
    rank_trends,
    trend_fit,
    write_trend_report,
)
from topictrace.errors import TrendUndefinedError


def rec(i, year, disciplines):
    return PubRecord(id=f"r{i}", title="t", year=year, disciplines=disciplines)


def series_from(counts_by_year):
    years = sorted(counts_by_year)
    start, end = years[0], years[-1]
    counts = tuple(counts_by_year.get(y, 0) for y in range(start, end + 1))
    return AnnualSeries(start, end, counts)


class TestDisciplineSeries:
    def test_multi_label_counts_once_per_label(self):
        corpus = Corpus((rec(1, 1990, ("Medicine", "Energy")),))
        result = discipline_series(corpus, YearRange(1990, 1990))
        assert result["medicine"].counts == (1,)
        assert result["energy"].counts == (1,)

    def test_no_labels_no_series(self):
        corpus = Corpus((rec(1, 1990, ()),))
        assert discipline_series(corpus, YearRange(1990, 1990)) == {}

    def test_top5_ranking_by_totals(self):
        totals = {
            "medicine": 3635,
            "environmental science": 3156,
            "energy": 1470,
            "physics and astronomy": 1437,
            "biochemistry genetics and molecular biology": 1198,
        }
        records = []
        i = 0
        for label, n in totals.items():
            for _ in range(n):
                records.append(rec(i, 1986 + i % 30, (label,)))
                i += 1
        result = discipline_series(Corpus(tuple(records)), YearRange(1986, 2015))
        ranked = sorted(result, key=lambda d: -result[d].total())
        assert ranked == list(totals)
        assert [result[d].total() for d in ranked] == list(totals.values())


class TestTrendFit:
    def test_three_point_hand_case(self):
        fit = trend_fit(series_from({1986: 10, 1987: 20, 1988: 30}))
        assert fit.total_docs == 60
        assert fit.n_points == 3
        assert abs(fit.slope - 1 / 6) < 1e-12
        assert abs(fit.intercept - 1 / 6) < 1e-12

    def test_constant_series_is_flat(self):
        fit = trend_fit(series_from({1990: 5, 1991: 5, 1992: 5}))
        assert fit.slope == pytest.approx(0.0, abs=1e-15)

    def test_zero_years_excluded(self):
        fit = trend_fit(series_from({1986: 30, 1987: 0, 1988: 10}))
        assert fit.n_points == 2
        assert abs(fit.slope - (-0.25)) < 1e-12
        assert abs(fit.intercept - 0.75) < 1e-12

    def test_undefined_with_single_nonzero_year(self):
        with pytest.raises(TrendUndefinedError):
            trend_fit(series_from({1986: 4, 1987: 0}))

    def test_slope_invariant_under_count_scaling(self):
        rng = random.Random(21)
        for _ in range(100):
            counts = {1986 + i: rng.randint(0, 40) for i in range(12)}
            if sum(1 for c in counts.values() if c) < 2:
                counts[1986] = 1
                counts[1995] = 3
            scale = rng.randint(2, 50)
            scaled = {y: c * scale for y, c in counts.items()}
            base = trend_fit(series_from(counts))
            rescaled = trend_fit(series_from(scaled))
            assert rescaled.slope == base.slope
            assert rescaled.intercept == base.intercept

    def test_reversed_series_negates_slope(self):
        counts = {1986: 3, 1987: 9, 1988: 1, 1989: 7}
        mirrored = {1986: 7, 1987: 1, 1988: 9, 1989: 3}
        assert trend_fit(series_from(mirrored)).slope == \
            pytest.approx(-trend_fit(series_from(counts)).slope, abs=1e-12)

    def test_normalized_points_sum_to_one(self):
        rng = random.Random(22)
        counts = {1986 + i: rng.randint(0, 9) for i in range(10)}
        counts[1986] = counts[1995] = 5
        fit = trend_fit(series_from(counts))
        total = sum(c for c in counts.values() if c)
        normalized = [c / total for c in counts.values() if c]
        assert sum(normalized) == pytest.approx(1.0, abs=1e-12)
        assert fit.total_docs == total


class TestRankTrends:
    def _fits(self, slopes):
        from topictrace.disciplines import TrendFit
        return [TrendFit(discipline=f"d{i}", slope=s, intercept=0.0,
                         n_points=2, total_docs=2)
                for i, s in enumerate(slopes)]

    def test_top_quartile_of_four(self):
        fits = self._fits([0.4, -0.3, 0.01, 0.02])
        kept = rank_trends(fits, 0.25)
        assert [f.discipline for f in kept] == ["d0"]

    def test_quantile_one_returns_all_sorted(self):
        fits = self._fits([0.1, -0.5, 0.3])
        kept = rank_trends(fits, 1.0)
        assert [f.discipline for f in kept] == ["d1", "d2", "d0"]

    def test_matches_sort_and_slice_oracle(self):
        rng = random.Random(30)
        slopes = [rng.uniform(-1, 1) for _ in range(8)]
        fits = self._fits(slopes)
        for quantile in (0.25, 0.5, 0.75, 1.0):
            kept = rank_trends(fits, quantile)
            expected = sorted(fits, key=lambda f: (-abs(f.slope), f.discipline))
            import math
            assert kept == expected[:math.ceil(quantile * len(fits))]

    def test_tie_break_lexicographic(self):
        fits = self._fits([0.5, 0.5])
        assert [f.discipline for f in rank_trends(fits, 0.5)] == ["d0"]

    def test_invalid_quantile(self):
        with pytest.raises(ValueError):
            rank_trends([], 0.0)


class TestPipelineHelpers:
    def test_fit_all_skips_undefined(self):
        series = {
            "ok": series_from({1986: 1, 1987: 2}),
            "thin": series_from({1986: 1, 1987: 0}),
        }
        fits, skipped = fit_all_trends(series)
        assert [f.discipline for f in fits] == ["ok"]
        assert skipped == ["thin"]

    def test_report_format(self, tmp_path):
        fits, _ = fit_all_trends({"a": series_from({1986: 1, 1987: 3})})
        path = tmp_path / "trends.csv"
        write_trend_report(fits, fits, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "discipline,slope,intercept,n_points,total_docs,selected"
        assert lines[1] == "a,0.5,0.25,2,4,1"
