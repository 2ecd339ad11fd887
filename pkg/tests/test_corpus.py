import io
import json
import random

import pytest

from topictrace.corpus import (
    Corpus,
    PubRecord,
    TopicQuery,
    filter_topic,
    filter_years,
    parse_records,
    validate,
    write_jsonl,
    write_rejects,
)
from topictrace.errors import IngestError


def make_record(i, **kwargs):
    defaults = dict(id=f"r{i}", title=f"paper {i}", year=1990)
    defaults.update(kwargs)
    return PubRecord(**defaults)


class TestPubRecord:
    def test_canonicalizes_labels(self):
        r = make_record(1, countries=("UA", " ukraine ", "ua"),
                        disciplines=("Medicine", "MEDICINE"))
        assert r.countries == ("ua", "ukraine")
        assert r.disciplines == ("medicine",)

    def test_rejects_empty_id(self):
        with pytest.raises(ValueError, match="empty id"):
            PubRecord(id="  ", title="t", year=1990)

    def test_rejects_year_out_of_range(self):
        with pytest.raises(ValueError, match="year out of range"):
            PubRecord(id="a", title="t", year=18986)
        with pytest.raises(ValueError, match="year out of range"):
            PubRecord(id="a", title="t", year=1899)

    def test_blank_abstract_becomes_none(self):
        assert make_record(1, abstract="   ").abstract is None


class TestParseJsonl:
    def test_single_line(self):
        line = json.dumps({"id": "x1", "title": "A study", "year": 1991,
                           "abstract": "text"})
        result = parse_records(io.StringIO(line + "\n"))
        assert len(result.corpus) == 1
        assert result.corpus.records[0].abstract == "text"
        assert result.rejects == []

    def test_year_out_of_range_rejected(self):
        bad = json.dumps({"id": "x1", "title": "t", "year": 18986})
        good = json.dumps({"id": "x2", "title": "t", "year": 1990})
        result = parse_records(f"{bad}\n{good}\n".encode())
        assert [r.id for r in result.corpus] == ["x2"]
        assert result.rejects[0].reason == "year out of range"
        assert result.rejects[0].line == 1

    def test_invalid_json_rejected(self):
        good = json.dumps({"id": "a", "title": "t", "year": 1990})
        good2 = json.dumps({"id": "b", "title": "t", "year": 1990})
        result = parse_records(io.StringIO(f"{good}\n{{not json\n{good2}\n"))
        assert len(result.corpus) == 2
        assert result.rejects[0].line == 2
        assert result.rejects[0].reason == "invalid json"

    def test_field_map_renames(self):
        line = json.dumps({"eid": "a", "name": "t", "pubyear": 1990})
        result = parse_records(io.StringIO(line), field_map={"eid": "id", "name": "title",
                                                "pubyear": "year"})
        assert result.corpus.records[0].id == "a"

    def test_reject_flood_is_hard_failure(self):
        lines = [json.dumps({"id": "a", "title": "t", "year": 1990}),
                 "junk", "junk"]
        with pytest.raises(IngestError, match="too many rejected rows"):
            parse_records(io.StringIO("\n".join(lines)))


class TestParseCsv:
    def test_duplicate_id_rejected(self):
        csv_text = ("id,title,year\n"
                    "a,First,1990\n"
                    "a,Copy,1991\n"
                    "b,Second,1992\n")
        result = parse_records(io.StringIO(csv_text), format="csv")
        assert [r.id for r in result.corpus] == ["a", "b"]
        assert len(result.rejects) == 1
        assert result.rejects[0].reason == "duplicate id"
        assert result.rejects[0].line == 3

    def test_list_cells_split_on_semicolon(self):
        csv_text = ("id,title,year,countries\n"
                    "a,t,1990,Ukraine; Germany ;ukraine\n")
        result = parse_records(io.StringIO(csv_text), format="csv")
        assert result.corpus.records[0].countries == ("ukraine", "germany")

    def test_missing_mapped_field_is_hard_failure(self):
        with pytest.raises(IngestError, match="missing required mapped field: year"):
            parse_records(io.StringIO("id,title\na,t\n"), format="csv")

    def test_header_rename(self):
        csv_text = "key,name,yr\na,t,1990\n"
        result = parse_records(io.StringIO(csv_text), format="csv",
                               field_map={"key": "id", "name": "title", "yr": "year"})
        assert result.corpus.records[0].year == 1990

    def test_no_header(self):
        with pytest.raises(IngestError, match="no header"):
            parse_records(io.StringIO(""), format="csv")


class TestRoundTrip:
    def test_parse_serialize_parse_equal(self):
        rng = random.Random(5)
        records = []
        for i in range(40):
            records.append(make_record(
                i,
                year=rng.randint(1986, 2015),
                abstract=None if rng.random() < 0.3 else f"abstract {i}",
                keywords=tuple(f"kw{rng.randint(0, 5)}" for _ in range(rng.randint(0, 3))),
                disciplines=tuple(rng.sample(["medicine", "energy", "physics"],
                                             rng.randint(0, 2))),
                countries=tuple(rng.sample(["ua", "de", "us", "jp"],
                                           rng.randint(0, 3))),
                source="synthetic",
            ))
        original = Corpus(tuple(records))
        buffer = io.StringIO()
        write_jsonl(original, buffer)
        reparsed = parse_records(io.StringIO(buffer.getvalue())).corpus
        assert reparsed.records == original.records

    def test_rejects_report_format(self, tmp_path):
        bad = json.dumps({"id": "a", "title": "t", "year": "nope"})
        good = json.dumps({"id": "b", "title": "t", "year": 1990})
        result = parse_records(io.StringIO(f"{good}\n{bad}\n"))
        path = tmp_path / "rejects.jsonl"
        write_rejects(result.rejects, path)
        rows = [json.loads(line) for line in path.read_text().splitlines()]
        assert rows == [{"line": 2, "reason": "invalid year"}]


class TestTopicQuery:
    def test_default_spellings_match(self):
        r = make_record(1, title="Thyroid cancer after Chernobyl")
        assert TopicQuery.default().matches(r)

    def test_case_insensitive_apostrophe_spelling(self):
        r = make_record(1, title="CHORNOBYL' revisited")
        assert TopicQuery.default().matches(r)

    def test_unrelated_record_not_matched(self):
        r = make_record(1, title="radiation effects", abstract="on mice")
        assert not TopicQuery.default().matches(r)

    def test_keywords_are_searched(self):
        r = make_record(1, title="untitled", keywords=("Chernobyl disaster",))
        assert TopicQuery.default().matches(r)

    def test_and_of_ors(self):
        q = TopicQuery.from_string("chernobyl|chornobyl & fukushima")
        both = make_record(1, title="chernobyl and fukushima compared")
        only_a = make_record(2, title="chernobyl alone")
        assert q.matches(both)
        assert not q.matches(only_a)

    def test_word_boundary_mode(self):
        q = TopicQuery(clauses=(("cher",),), word_boundary=True)
        assert not q.matches(make_record(1, title="chernobyl"))
        assert q.matches(make_record(2, title="the cher study"))

    def test_empty_query_invalid(self):
        with pytest.raises(ValueError):
            TopicQuery(clauses=())
        with pytest.raises(ValueError):
            TopicQuery(clauses=(("",),))


class TestFilterTopic:
    def _random_corpus(self, seed):
        rng = random.Random(seed)
        words = ["chernobyl", "fukushima", "radiation", "forest", "policy"]
        records = []
        for i in range(60):
            title = " ".join(rng.sample(words, rng.randint(1, 3)))
            records.append(make_record(i, title=title))
        return Corpus(tuple(records))

    def test_idempotent(self):
        corpus = self._random_corpus(1)
        q = TopicQuery.default()
        once = filter_topic(corpus, q)
        twice = filter_topic(once, q)
        assert once.records == twice.records

    def test_subset_and_predicate(self):
        corpus = self._random_corpus(2)
        q = TopicQuery.default()
        kept = filter_topic(corpus, q)
        assert len(kept) <= len(corpus)
        assert all(q.matches(r) for r in kept)
        dropped = set(corpus.records) - set(kept.records)
        assert all(not q.matches(r) for r in dropped)

    def test_order_preserved(self):
        corpus = self._random_corpus(3)
        kept = filter_topic(corpus, TopicQuery.default())
        ids = [r.id for r in corpus if TopicQuery.default().matches(r)]
        assert [r.id for r in kept] == ids

    def test_filter_years(self):
        records = tuple(make_record(i, year=1980 + i) for i in range(10, 40))
        kept = filter_years(Corpus(records), 2000, 2005)
        assert [r.year for r in kept] == list(range(2000, 2006))


class TestValidate:
    def test_missing_counters(self):
        corpus = Corpus((
            make_record(1, countries=("ua",), abstract="x",
                        disciplines=("medicine",)),
            make_record(2),
        ))
        report = validate(corpus)
        assert report.n_records == 2
        assert report.missing_countries == 1
        assert report.missing_abstract == 1
        assert report.missing_disciplines == 1

    def test_empty_corpus(self):
        report = validate(Corpus(()))
        assert report.n_records == 0
        assert report.missing_abstract == 0
        assert report.duplicate_ids == ()

    def test_parse_never_yields_duplicates(self):
        rows = [json.dumps({"id": i, "title": "t", "year": 1990})
                for i in ["a", "a", "b"]]
        result = parse_records(io.StringIO("\n".join(rows)))
        assert validate(result.corpus).duplicate_ids == ()
        assert [r.id for r in result.corpus] == ["a", "b"]
