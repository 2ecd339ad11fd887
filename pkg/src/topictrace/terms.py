"""Candidate-term extraction, counting, scoring, and selection.

Candidate terms ("semantic units") are noun phrases: zero or more
adjectives followed by one or more nouns. Every maximal such token run of
n words also yields its n suffixes as nested units, so "power plant
accident" inside a longer phrase is counted in its own right. Counting is
binary per document. Term quality combines a specificity score (how far a
unit's discipline distribution departs from the background distribution of
all units) with document frequency.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Collection, Iterable, Mapping, NamedTuple, Sequence

from .errors import (
    TermhoodUndefinedError,
    TermSelectionError,
    ZipfFitError,
)
from .tagging import POS_ADJECTIVE, POS_NOUN, TaggedToken, Tagger


@dataclass(frozen=True, order=True)
class SemanticUnit:
    """A candidate term: lower-cased lemmas of one noun phrase."""

    words: tuple[str, ...]

    def __post_init__(self):
        if not self.words or any(not w for w in self.words):
            raise ValueError("unit needs non-empty words")
        object.__setattr__(self, "words", tuple(w.lower() for w in self.words))

    @property
    def arity(self) -> int:
        return len(self.words)

    @property
    def text(self) -> str:
        return " ".join(self.words)

    @classmethod
    def of(cls, text: str) -> "SemanticUnit":
        return cls(tuple(text.split()))


class DocumentUnits(NamedTuple):
    """One document's identity, metadata, and deduplicated unit set."""

    doc_id: str
    year: int
    disciplines: tuple[str, ...]
    units: frozenset[SemanticUnit]


@dataclass
class UnitStats:
    """Binary occurrence counts for one unit."""

    k: int
    k_by_discipline: dict[str, int]
    first_year: int
    doc_ids: frozenset[str]


class OccurrenceTable:
    """Per-unit binary document counts, split by discipline.

    A document labeled with m disciplines contributes once to each of the
    m per-discipline counts, and once to the overall count k.
    """

    def __init__(self, stats: dict[SemanticUnit, UnitStats],
                 disciplines: tuple[str, ...], n_documents: int):
        self.stats = stats
        self.disciplines = disciplines
        self.n_documents = n_documents

    def __len__(self) -> int:
        return len(self.stats)

    def units(self) -> list[SemanticUnit]:
        return sorted(self.stats)

    def k(self, unit: SemanticUnit) -> int:
        return self.stats[unit].k

    def threshold(self, k_c: int) -> "OccurrenceTable":
        """Drop units that occurred in k_c or fewer documents."""
        kept = {u: s for u, s in self.stats.items() if s.k > k_c}
        return OccurrenceTable(kept, self.disciplines, self.n_documents)


def _maximal_runs(tokens: Sequence[TaggedToken]) -> list[list[str]]:
    runs: list[list[str]] = []
    i = 0
    n = len(tokens)
    while i < n:
        j = i
        while j < n and tokens[j].pos == POS_ADJECTIVE:
            j += 1
        k = j
        while k < n and tokens[k].pos == POS_NOUN:
            k += 1
        if k > j:
            runs.append([t.lemma.lower() for t in tokens[i:k]])
            i = k
        else:
            # adjectives with no following noun, or a non-phrase token
            i = j + 1 if j > i else i + 1
    return runs


def units_from_tokens(tokens: Sequence[TaggedToken]) -> list[SemanticUnit]:
    """Units from one tagged document: maximal phrase runs plus all suffixes.

    Each maximal adjective*-noun+ run of n words yields n units (every
    suffix still matches the grammar). Duplicates within the document are
    dropped; the result is sorted for determinism.
    """
    units: set[SemanticUnit] = set()
    for run in _maximal_runs(tokens):
        for start in range(len(run)):
            units.add(SemanticUnit(tuple(run[start:])))
    return sorted(units)


def extract_semantic_units(text: str, tagger: Tagger) -> list[SemanticUnit]:
    """Tag a document and extract its semantic units."""
    return units_from_tokens(tagger(text))


def count_occurrences(documents: Iterable[DocumentUnits]) -> OccurrenceTable:
    """Tally binary per-document and per-discipline counts for every unit."""
    stats: dict[SemanticUnit, UnitStats] = {}
    disciplines: set[str] = set()
    doc_lists: dict[SemanticUnit, list[str]] = {}
    n_documents = 0
    for doc in documents:
        n_documents += 1
        disciplines.update(doc.disciplines)
        for unit in doc.units:
            entry = stats.get(unit)
            if entry is None:
                entry = UnitStats(k=0, k_by_discipline={}, first_year=doc.year,
                                  doc_ids=frozenset())
                stats[unit] = entry
                doc_lists[unit] = []
            entry.k += 1
            entry.first_year = min(entry.first_year, doc.year)
            doc_lists[unit].append(doc.doc_id)
            for discipline in doc.disciplines:
                entry.k_by_discipline[discipline] = (
                    entry.k_by_discipline.get(discipline, 0) + 1)
    for unit, ids in doc_lists.items():
        stats[unit].doc_ids = frozenset(ids)
    return OccurrenceTable(stats, tuple(sorted(disciplines)), n_documents)


def survivor_curve(table: OccurrenceTable) -> list[tuple[int, int]]:
    """(k_c, units with k > k_c) for k_c = 1..max(k); motivates the cutoff."""
    if not table.stats:
        raise ValueError("survivor curve needs a non-empty table")
    counts = sorted(s.k for s in table.stats.values())
    max_k = counts[-1]
    curve = []
    for k_c in range(1, max_k + 1):
        remaining = sum(1 for k in counts if k > k_c)
        curve.append((k_c, remaining))
    return curve


def frequency_rank(table: OccurrenceTable) -> list[tuple[SemanticUnit, int]]:
    """Units by descending count; ties broken lexicographically."""
    return sorted(((u, s.k) for u, s in table.stats.items()),
                  key=lambda pair: (-pair[1], pair[0].text))


@dataclass(frozen=True)
class ZipfFit:
    """Power-law fit of the frequency-rank distribution."""

    exponent: float
    r_squared: float
    n_points: int


def fit_zipf(ranked: Sequence[tuple[object, float]], min_freq: float = 2) -> ZipfFit:
    """Least-squares line on (log rank, log count) for counts >= min_freq.

    The exponent is the negated slope; perfectly power-law input recovers
    it to within float rounding. Fewer than 3 usable ranks, or all-equal
    counts, raise ZipfFitError.
    """
    xs = []
    ys = []
    for rank, (_, count) in enumerate(ranked, start=1):
        if count >= min_freq:
            xs.append(math.log(rank))
            ys.append(math.log(count))
    if len(xs) < 3:
        raise ZipfFitError(f"need >= 3 ranks with count >= {min_freq}, got {len(xs)}")
    if len(set(ys)) == 1:
        raise ZipfFitError("degenerate rank distribution: all counts equal")
    slope, _ = statistics.linear_regression(xs, ys)
    r_squared = statistics.correlation(xs, ys) ** 2
    return ZipfFit(exponent=-slope, r_squared=r_squared, n_points=len(xs))


def discipline_priors(table: OccurrenceTable) -> dict[str, float]:
    """Background probability of any unit occurrence falling in a discipline."""
    masses = {d: 0 for d in table.disciplines}
    for stats in table.stats.values():
        for discipline, k_i in stats.k_by_discipline.items():
            masses[discipline] += k_i
    total = sum(masses.values())
    if total == 0:
        raise TermhoodUndefinedError("table has no per-discipline occurrences")
    return {d: masses[d] / total for d in table.disciplines}


def _discipline_profile(unit: SemanticUnit, table: OccurrenceTable,
                        priors: Mapping[str, float]) -> dict[str, float]:
    """Normalized per-discipline weight vector of a unit vs. the background.

    Only disciplines with positive prior are in scope; the vector sums
    to 1.
    """
    stats = table.stats.get(unit)
    if stats is None:
        raise TermhoodUndefinedError(f"unknown unit: {unit.text!r}")
    scope = [d for d in table.disciplines if priors.get(d, 0.0) > 0.0]
    mass = sum(stats.k_by_discipline.get(d, 0) for d in scope)
    if mass == 0:
        raise TermhoodUndefinedError(
            f"unit has no per-discipline occurrences: {unit.text!r}")
    ratios = {
        d: (stats.k_by_discipline.get(d, 0) / mass) / priors[d]
        for d in scope
    }
    norm = math.fsum(ratios.values())
    return {d: ratio / norm for d, ratio in ratios.items()}


def termhood(unit: SemanticUnit, table: OccurrenceTable,
             priors: Mapping[str, float] | None = None) -> float:
    """Specificity score: sum of log p over the unit's discipline profile.

    Always <= 0; exactly 0 when occurrences are confined to a single
    discipline. Zero-probability entries contribute nothing.
    """
    if priors is None:
        priors = discipline_priors(table)
    profile = _discipline_profile(unit, table, priors)
    return math.fsum(math.log(p) for p in profile.values() if p > 0.0)


@dataclass(frozen=True)
class TermScore:
    """A selected term with its scores and annotations."""

    unit: SemanticUnit
    termhood: float
    k: int
    t_norm: float
    k_norm: float
    score: float
    specific_discipline: str = ""
    first_year: int | None = None


def _nearest_rank(values: list[float], percentile: float) -> float:
    ordered = sorted(values)
    rank = max(1, math.ceil(percentile / 100 * len(ordered)))
    return ordered[min(rank, len(ordered)) - 1]


def _min_max(values: list[float]) -> list[float]:
    lo, hi = min(values), max(values)
    if hi == lo:
        # No spread: every value sits at the shared extreme.
        return [1.0 for _ in values]
    return [(v - lo) / (hi - lo) for v in values]


def select_terms(table: OccurrenceTable, percentile: float = 50.0,
                 top_n: int = 50,
                 priors: Mapping[str, float] | None = None) -> list[TermScore]:
    """Pick the top terms by the product of normalized specificity and count.

    Units must strictly exceed the nearest-rank percentile of all termhood
    values; termhood and count are then min-max normalized over the
    survivors and the product ranks the list (ties: higher termhood, then
    lexicographic). An empty survivor set yields an empty selection; a
    single survivor cannot be normalized and raises TermSelectionError.
    """
    if not 0 < percentile <= 100:
        raise ValueError("percentile must be in (0, 100]")
    if top_n < 1:
        raise ValueError("top_n must be >= 1")
    if not table.stats:
        return []
    if priors is None:
        priors = discipline_priors(table)
    scores = {unit: termhood(unit, table, priors) for unit in table.units()}
    cutoff = _nearest_rank(list(scores.values()), percentile)
    survivors = [unit for unit in table.units() if scores[unit] > cutoff]
    if not survivors:
        return []
    if len(survivors) < 2:
        raise TermSelectionError(
            "normalization needs at least 2 surviving units")
    t_norm = _min_max([scores[u] for u in survivors])
    k_norm = _min_max([float(table.stats[u].k) for u in survivors])
    selected = [
        TermScore(
            unit=unit,
            termhood=scores[unit],
            k=table.stats[unit].k,
            t_norm=tn,
            k_norm=kn,
            score=tn * kn,
        )
        for unit, tn, kn in zip(survivors, t_norm, k_norm)
    ]
    selected.sort(key=lambda ts: (-ts.score, -ts.termhood, ts.unit.text))
    return selected[:top_n]


def annotate_terms(scores: Iterable[TermScore], table: OccurrenceTable,
                   priors: Mapping[str, float] | None = None) -> list[TermScore]:
    """Attach the most over-represented discipline and the first year seen.

    Ties on the profile weight go to the larger raw count, then to label
    order.
    """
    if priors is None:
        priors = discipline_priors(table)
    annotated = []
    for term in scores:
        profile = _discipline_profile(term.unit, table, priors)
        stats = table.stats[term.unit]
        best = min(
            profile,
            key=lambda d: (-profile[d], -stats.k_by_discipline.get(d, 0), d),
        )
        annotated.append(replace(term, specific_discipline=best,
                                 first_year=stats.first_year))
    return annotated


def cooccurrence_matrix(
    documents: Iterable[Collection[SemanticUnit]],
    terms: Collection[SemanticUnit],
) -> dict[tuple[SemanticUnit, SemanticUnit], int]:
    """Binary document co-occurrence counts over the given terms.

    Keys are (a, b) with a <= b; the diagonal (u, u) carries the number of
    documents containing u. Pairs never seen together are absent.
    """
    term_set = set(terms)
    matrix: dict[tuple[SemanticUnit, SemanticUnit], int] = {}
    for units in documents:
        present = sorted(term_set.intersection(units))
        for i, a in enumerate(present):
            for b in present[i:]:
                key = (a, b)
                matrix[key] = matrix.get(key, 0) + 1
    return matrix


def _write_text(target, text: str) -> None:
    if isinstance(target, (str, Path)):
        Path(target).write_text(text, encoding="utf-8")
    else:
        target.write(text)


def write_term_report(scores: Iterable[TermScore], target) -> None:
    lines = ["term,k,termhood,t_norm,k_norm,score,specific_discipline,first_year"]
    for ts in scores:
        first_year = "" if ts.first_year is None else ts.first_year
        lines.append(
            f"{ts.unit.text},{ts.k},{ts.termhood:.12g},{ts.t_norm:.12g},"
            f"{ts.k_norm:.12g},{ts.score:.12g},{ts.specific_discipline},{first_year}")
    _write_text(target, "\n".join(lines) + "\n")


def write_cooccurrence_csv(
    matrix: Mapping[tuple[SemanticUnit, SemanticUnit], int], target
) -> None:
    """Off-diagonal co-occurrence triples (term_a < term_b), sorted."""
    lines = ["term_a,term_b,count"]
    for (a, b), count in sorted(matrix.items(),
                                key=lambda item: (item[0][0].text, item[0][1].text)):
        if a != b and count > 0:
            lines.append(f"{a.text},{b.text},{count}")
    _write_text(target, "\n".join(lines) + "\n")


def write_survivor_csv(curve: list[tuple[int, int]], target) -> None:
    lines = ["k_c,units_remaining"]
    lines.extend(f"{k_c},{remaining}" for k_c, remaining in curve)
    _write_text(target, "\n".join(lines) + "\n")
