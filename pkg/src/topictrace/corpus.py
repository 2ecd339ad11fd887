"""Bibliographic records: ingest, validation, and topic filtering.

A corpus is an immutable, ordered collection of publication records read
from JSONL or CSV exports of a bibliographic database. Rows that violate
the record invariants are collected into a rejects report instead of
aborting the whole ingest.
"""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Iterator

from .errors import IngestError

YEAR_MIN = 1900
YEAR_MAX = 2100

#: Query spellings used when no topic is configured.
DEFAULT_TOPIC_SPELLINGS = ("chornobyl", "chornobyl'", "chernobyl", "chernobyl'")

REQUIRED_FIELDS = ("id", "title", "year")
LIST_FIELDS = ("keywords", "disciplines", "countries")
SCHEMA_FIELDS = REQUIRED_FIELDS + ("abstract",) + LIST_FIELDS + ("source",)

#: Separator for list-valued cells in CSV input.
CSV_LIST_SEPARATOR = ";"


def canonical_label(value: str) -> str:
    """Trim and case-fold a discipline or country label."""
    return value.strip().casefold()


def _canonical_labels(values: Iterable[str]) -> tuple[str, ...]:
    out: list[str] = []
    for value in values:
        label = canonical_label(str(value))
        if label and label not in out:
            out.append(label)
    return tuple(out)


@dataclass(frozen=True)
class PubRecord:
    """One bibliographic record.

    Discipline and country labels are canonicalized (trim + case-fold) and
    deduplicated on construction; construction fails with ``ValueError`` for
    an empty id or a year outside 1900..2100.
    """

    id: str
    title: str
    year: int
    abstract: str | None = None
    keywords: tuple[str, ...] = ()
    disciplines: tuple[str, ...] = ()
    countries: tuple[str, ...] = ()
    source: str = ""

    def __post_init__(self):
        rid = str(self.id).strip()
        if not rid:
            raise ValueError("empty id")
        if not isinstance(self.year, int) or isinstance(self.year, bool):
            raise ValueError("invalid year")
        if not YEAR_MIN <= self.year <= YEAR_MAX:
            raise ValueError("year out of range")
        object.__setattr__(self, "id", rid)
        object.__setattr__(self, "title", str(self.title))
        abstract = self.abstract
        if abstract is not None:
            abstract = str(abstract).strip() or None
        object.__setattr__(self, "abstract", abstract)
        keywords = tuple(k for k in (str(k).strip() for k in self.keywords) if k)
        object.__setattr__(self, "keywords", keywords)
        object.__setattr__(self, "disciplines", _canonical_labels(self.disciplines))
        object.__setattr__(self, "countries", _canonical_labels(self.countries))
        object.__setattr__(self, "source", str(self.source).strip())


@dataclass(frozen=True)
class Provenance:
    """Where a corpus came from; the timestamp is informational only."""

    source: str = ""
    ingested_at: str = field(default="", compare=False)


@dataclass(frozen=True)
class Corpus:
    """Ordered, immutable collection of records (stable ingest order)."""

    records: tuple[PubRecord, ...]
    provenance: Provenance = Provenance()

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[PubRecord]:
        return iter(self.records)

    def year_span(self) -> tuple[int, int] | None:
        """Min and max publication year, or None for an empty corpus."""
        if not self.records:
            return None
        years = [r.year for r in self.records]
        return min(years), max(years)


@dataclass(frozen=True)
class TopicQuery:
    """AND-of-ORs text query over title, abstract, and keywords.

    Each clause is a set of alternative spellings; a record matches a clause
    if any spelling occurs case-insensitively in any searched field, and
    matches the query if every clause matches. Matching is plain substring
    by default; set ``word_boundary`` to require non-word characters (or
    ends of text) around the hit.
    """

    clauses: tuple[tuple[str, ...], ...]
    word_boundary: bool = False

    def __post_init__(self):
        if not self.clauses:
            raise ValueError("query needs at least one clause")
        normalized = []
        for clause in self.clauses:
            spellings = tuple(str(s) for s in clause)
            if not spellings or any(not s for s in spellings):
                raise ValueError("every clause needs non-empty spellings")
            normalized.append(spellings)
        object.__setattr__(self, "clauses", tuple(normalized))

    @classmethod
    def default(cls) -> "TopicQuery":
        return cls(clauses=(DEFAULT_TOPIC_SPELLINGS,))

    @classmethod
    def from_string(cls, text: str, word_boundary: bool = False) -> "TopicQuery":
        """Parse ``a|b & c|d`` into clauses of alternative spellings."""
        clauses = []
        for chunk in text.split("&"):
            spellings = tuple(s.strip() for s in chunk.split("|") if s.strip())
            if spellings:
                clauses.append(spellings)
        return cls(clauses=tuple(clauses), word_boundary=word_boundary)

    def _hit(self, spelling: str, haystack: str) -> bool:
        if self.word_boundary:
            pattern = r"(?<!\w)" + re.escape(spelling) + r"(?!\w)"
            return re.search(pattern, haystack) is not None
        return spelling in haystack

    def matches(self, record: PubRecord) -> bool:
        fields = [record.title]
        if record.abstract:
            fields.append(record.abstract)
        fields.extend(record.keywords)
        haystacks = [f.casefold() for f in fields]
        for clause in self.clauses:
            spellings = [s.casefold() for s in clause]
            if not any(self._hit(s, h) for s in spellings for h in haystacks):
                return False
        return True


@dataclass(frozen=True)
class Reject:
    """One rejected input row."""

    line: int
    reason: str


@dataclass
class ParseResult:
    corpus: Corpus
    rejects: list[Reject]


@dataclass(frozen=True)
class ValidationReport:
    n_records: int
    missing_abstract: int
    missing_countries: int
    missing_disciplines: int
    duplicate_ids: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "n_records": self.n_records,
            "missing_abstract": self.missing_abstract,
            "missing_countries": self.missing_countries,
            "missing_disciplines": self.missing_disciplines,
            "duplicate_ids": list(self.duplicate_ids),
        }


def _read_text(stream) -> str:
    if isinstance(stream, (str, Path)):
        return Path(stream).read_text(encoding="utf-8")
    if isinstance(stream, bytes):
        return stream.decode("utf-8")
    data = stream.read()
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data


def _listify(value, field_name: str) -> list[str]:
    if value is None:
        return []
    if isinstance(value, str):
        return [value] if value.strip() else []
    if isinstance(value, (list, tuple)):
        return [str(v) for v in value]
    raise ValueError(f"{field_name} must be a list")


def _record_from_row(row: dict, source: str) -> PubRecord:
    for name in REQUIRED_FIELDS:
        if row.get(name) in (None, ""):
            raise ValueError(f"missing required field: {name}")
    raw_year = row["year"]
    if isinstance(raw_year, bool):
        raise ValueError("invalid year")
    if isinstance(raw_year, int):
        year = raw_year
    else:
        try:
            year = int(str(raw_year).strip())
        except ValueError:
            raise ValueError("invalid year") from None
    abstract = row.get("abstract")
    return PubRecord(
        id=str(row["id"]),
        title=str(row["title"]),
        year=year,
        abstract=None if abstract is None else str(abstract),
        keywords=tuple(_listify(row.get("keywords"), "keywords")),
        disciplines=tuple(_listify(row.get("disciplines"), "disciplines")),
        countries=tuple(_listify(row.get("countries"), "countries")),
        source=str(row.get("source") or source),
    )


def _iter_jsonl_rows(text: str, field_map: dict[str, str] | None):
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError:
            yield lineno, None, "invalid json"
            continue
        if not isinstance(obj, dict):
            yield lineno, None, "row is not an object"
            continue
        if field_map:
            obj = {field_map.get(k, k): v for k, v in obj.items()}
        yield lineno, obj, None


def _iter_csv_rows(text: str, field_map: dict[str, str] | None):
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise IngestError("csv input has no header row") from None
    field_map = field_map or {}
    columns = [field_map.get(h.strip(), h.strip()) for h in header]
    for name in REQUIRED_FIELDS:
        if name not in columns:
            raise IngestError(f"missing required mapped field: {name}")
    for cells in reader:
        lineno = reader.line_num
        if not any(c.strip() for c in cells):
            continue
        row: dict = {}
        for name, cell in zip(columns, cells):
            if name not in SCHEMA_FIELDS:
                continue
            if name in LIST_FIELDS:
                row[name] = [p.strip() for p in cell.split(CSV_LIST_SEPARATOR) if p.strip()]
            else:
                row[name] = cell.strip()
        yield lineno, row, None


def parse_records(stream, format: str = "jsonl", field_map: dict[str, str] | None = None,
                  source: str = "") -> ParseResult:
    """Parse a JSONL or CSV stream into a corpus plus a rejects report.

    ``field_map`` renames input field/header names to the record schema
    names (id, title, year, abstract, keywords, disciplines, countries,
    source). Malformed rows become rejects; more than 50% rejected rows,
    or a CSV header that does not cover id/title/year, raises IngestError.
    """
    text = _read_text(stream)
    if format == "jsonl":
        rows = _iter_jsonl_rows(text, field_map)
    elif format == "csv":
        rows = _iter_csv_rows(text, field_map)
    else:
        raise IngestError(f"unknown input format: {format}")

    records: list[PubRecord] = []
    rejects: list[Reject] = []
    seen_ids: set[str] = set()
    for lineno, row, reason in rows:
        if reason is not None:
            rejects.append(Reject(lineno, reason))
            continue
        try:
            record = _record_from_row(row, source)
        except ValueError as err:
            rejects.append(Reject(lineno, str(err)))
            continue
        if record.id in seen_ids:
            rejects.append(Reject(lineno, "duplicate id"))
            continue
        seen_ids.add(record.id)
        records.append(record)

    total = len(records) + len(rejects)
    if total and 2 * len(rejects) > total:
        raise IngestError(f"too many rejected rows: {len(rejects)} of {total}")
    provenance = Provenance(
        source=source,
        ingested_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
    )
    return ParseResult(corpus=Corpus(tuple(records), provenance), rejects=rejects)


def filter_topic(corpus: Corpus, query: TopicQuery) -> Corpus:
    """Sub-corpus of records matching the query, ingest order preserved."""
    kept = tuple(r for r in corpus.records if query.matches(r))
    return Corpus(records=kept, provenance=corpus.provenance)


def filter_years(corpus: Corpus, start: int | None, end: int | None) -> Corpus:
    """Sub-corpus of records with start <= year <= end (either bound optional)."""
    kept = tuple(
        r for r in corpus.records
        if (start is None or r.year >= start) and (end is None or r.year <= end)
    )
    return Corpus(records=kept, provenance=corpus.provenance)


def validate(corpus: Corpus) -> ValidationReport:
    """Count records missing optional metadata and list duplicate ids."""
    seen: set[str] = set()
    duplicates: list[str] = []
    missing_abstract = missing_countries = missing_disciplines = 0
    for record in corpus.records:
        if record.abstract is None:
            missing_abstract += 1
        if not record.countries:
            missing_countries += 1
        if not record.disciplines:
            missing_disciplines += 1
        if record.id in seen:
            if record.id not in duplicates:
                duplicates.append(record.id)
        else:
            seen.add(record.id)
    return ValidationReport(
        n_records=len(corpus.records),
        missing_abstract=missing_abstract,
        missing_countries=missing_countries,
        missing_disciplines=missing_disciplines,
        duplicate_ids=tuple(duplicates),
    )


def record_to_dict(record: PubRecord) -> dict:
    """JSON-ready dict for one record; empty optional fields are omitted."""
    obj: dict = {"id": record.id, "title": record.title, "year": record.year}
    if record.abstract is not None:
        obj["abstract"] = record.abstract
    if record.keywords:
        obj["keywords"] = list(record.keywords)
    if record.disciplines:
        obj["disciplines"] = list(record.disciplines)
    if record.countries:
        obj["countries"] = list(record.countries)
    if record.source:
        obj["source"] = record.source
    return obj


def write_jsonl(corpus: Corpus, target) -> None:
    """Serialize a corpus as one JSON object per line (round-trips via parse)."""
    lines = [json.dumps(record_to_dict(r), ensure_ascii=False, sort_keys=True)
             for r in corpus.records]
    text = "".join(line + "\n" for line in lines)
    if isinstance(target, (str, Path)):
        Path(target).write_text(text, encoding="utf-8")
    else:
        target.write(text)


def write_rejects(rejects: list[Reject], target) -> None:
    """Write the rejects report as JSONL of {line, reason}."""
    lines = [json.dumps({"line": r.line, "reason": r.reason}, sort_keys=True)
             for r in rejects]
    text = "".join(line + "\n" for line in lines)
    if isinstance(target, (str, Path)):
        Path(target).write_text(text, encoding="utf-8")
    else:
        target.write(text)
