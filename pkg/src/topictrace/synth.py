"""Deterministic synthetic corpus generator for demos and benchmarks.

Generates event-topic publication records whose shape loosely mirrors a
real bibliography: a post-event publication surge with anniversary bumps,
country collaborations that densify over time, and titles/abstracts built
from noun-phrase vocabulary so the term pipeline has something to chew on.
Identical arguments always produce identical records.
"""

from __future__ import annotations

import argparse
import random

from .corpus import Corpus, PubRecord, write_jsonl

SPELLINGS = ("Chornobyl", "Chernobyl", "chernobyl", "chornobyl'")

ADJECTIVES = (
    "acute", "chronic", "environmental", "genetic", "invisible", "long-term",
    "low-dose", "radioactive", "regional", "severe", "thermal", "wild",
)

NOUNS = (
    "accident", "area", "cancer", "carcinoma", "cleanup", "contamination",
    "dose", "ecosystem", "effect", "exposure", "fallout", "forest", "gene",
    "health", "isotope", "lake", "liquidator", "migration", "mutation",
    "plant", "policy", "population", "radiation", "reactor", "risk", "sediment",
    "soil", "thyroid", "water", "worker", "zone",
)

COUNTRIES = (
    "ukraine", "russia", "belarus", "germany", "france", "united states",
    "japan", "united kingdom", "italy", "poland", "sweden", "austria",
    "canada", "spain", "norway", "finland", "czechoslovakia", "hungary",
    "china", "india", "brazil", "australia", "netherlands", "switzerland",
    "greece", "turkey", "israel", "south korea", "denmark", "belgium",
)

DISCIPLINES = (
    "medicine", "environmental science", "energy", "physics and astronomy",
    "biochemistry genetics and molecular biology", "social sciences",
    "arts and humanities", "agricultural and biological sciences",
    "engineering", "economics",
)


def _year_weights(start: int, end: int, event_year: int) -> list[float]:
    weights = []
    for year in range(start, end + 1):
        age = year - event_year
        if age < 0:
            weights.append(0.05)
            continue
        base = 1.0 + 2.5 * min(age, 4) / 4 - 0.03 * max(age - 4, 0)
        if age in (10, 20, 25):
            base *= 1.8  # anniversary bumps
        if age == 23:
            base *= 1.3  # off-cycle bump
        weights.append(max(base, 0.1))
    return weights


def _phrase(rng: random.Random) -> str:
    words = []
    if rng.random() < 0.5:
        words.append(rng.choice(ADJECTIVES))
    words.extend(rng.choice(NOUNS) for _ in range(rng.randint(1, 3)))
    return " ".join(words)


def _countries_for(rng: random.Random, year: int, start: int, end: int) -> list[str]:
    progress = (year - start) / max(end - start, 1)
    # Collaborations broaden over time: solo papers early, consortia late.
    max_size = 1 + round(4 * progress)
    size = rng.randint(1, max(1, max_size))
    pool_size = max(6, round(len(COUNTRIES) * (0.3 + 0.7 * progress)))
    pool = COUNTRIES[:pool_size]
    return rng.sample(pool, min(size, len(pool)))


def generate_records(n_records: int = 10000, seed: int = 7,
                     start_year: int = 1986, end_year: int = 2015,
                     event_year: int = 1986) -> list[PubRecord]:
    rng = random.Random(seed)
    years = list(range(start_year, end_year + 1))
    weights = _year_weights(start_year, end_year, event_year)
    records = []
    for i in range(n_records):
        year = rng.choices(years, weights=weights)[0]
        on_topic = rng.random() < 0.95
        title_parts = [_phrase(rng)]
        if on_topic:
            title_parts.insert(rng.randrange(2), rng.choice(SPELLINGS))
        if on_topic and year >= 2011 and rng.random() < 0.2:
            title_parts.append("fukushima comparison")
        title = " ".join(title_parts)

        abstract = None
        if rng.random() < 0.9:
            sentences = []
            for _ in range(rng.randint(2, 4)):
                sentences.append(
                    f"The {_phrase(rng)} of the {_phrase(rng)} was studied "
                    f"near the {_phrase(rng)}.")
            abstract = " ".join(sentences)

        n_disciplines = rng.choices((1, 2, 3), weights=(6, 3, 1))[0]
        disciplines = rng.sample(DISCIPLINES, n_disciplines)
        countries = [] if rng.random() < 0.15 else _countries_for(
            rng, year, start_year, end_year)
        keywords = rng.sample(NOUNS, rng.randint(0, 3))

        records.append(PubRecord(
            id=f"r{i:06d}",
            title=title,
            year=year,
            abstract=abstract,
            keywords=tuple(keywords),
            disciplines=tuple(disciplines),
            countries=tuple(countries),
            source="synthetic",
        ))
    return records


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        description="Write a deterministic synthetic corpus as JSONL.")
    parser.add_argument("--records", type=int, default=10000)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--start-year", type=int, default=1986)
    parser.add_argument("--end-year", type=int, default=2015)
    parser.add_argument("--out", required=True)
    args = parser.parse_args(argv)
    records = generate_records(args.records, args.seed,
                               args.start_year, args.end_year)
    write_jsonl(Corpus(tuple(records)), args.out)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
