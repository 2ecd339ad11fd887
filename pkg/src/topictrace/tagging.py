"""Part-of-speech tagging behind a minimal contract.

A tagger is any callable mapping raw text to a list of TaggedToken with pos
in {noun, adjective, other}. Two implementations ship here: a rule tagger
(lexicons + suffix heuristics, no external models) and a reader for
externally pre-tagged token streams.

The rule tagger leans deliberately toward "noun": unknown words are nouns,
so technical compounds like "power plant accident" survive as unbroken
noun runs, and hyphenated modifiers ("low-dose") default to adjectives.
Proper nouns count as nouns for phrase-grammar purposes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable

POS_NOUN = "noun"
POS_ADJECTIVE = "adjective"
POS_OTHER = "other"

_ADJ_SUFFIXES = ("ible", "able", "ous", "ive", "ful", "less", "ic")

_TOKEN_RE = re.compile(r"[^\W_]+(?:['\-][^\W_]+)*", re.UNICODE)


@dataclass(frozen=True)
class TaggedToken:
    surface: str
    lemma: str
    pos: str

    def __post_init__(self):
        if not self.lemma:
            raise ValueError("empty lemma")
        if self.pos not in (POS_NOUN, POS_ADJECTIVE, POS_OTHER):
            raise ValueError(f"unknown pos: {self.pos!r}")


Tagger = Callable[[str], "list[TaggedToken]"]


def _load_wordlist(name: str) -> frozenset[str]:
    text = resources.files("topictrace").joinpath(f"data/{name}").read_text("utf-8")
    words = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line.casefold())
    return frozenset(words)


def _load_irregulars() -> dict[str, str]:
    text = resources.files("topictrace").joinpath("data/irregular_nouns.tsv").read_text("utf-8")
    mapping = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        plural, lemma = line.split("\t")
        mapping[plural.casefold()] = lemma.casefold()
    return mapping


class RuleTagger:
    """Lexicon + suffix-heuristic tagger with plural-noun lemmatization."""

    _function_words: frozenset[str] | None = None
    _adjectives: frozenset[str] | None = None
    _noun_overrides: frozenset[str] | None = None
    _irregulars: dict[str, str] | None = None

    def __init__(self):
        cls = type(self)
        if cls._function_words is None:
            cls._function_words = _load_wordlist("function_words.txt")
            cls._adjectives = _load_wordlist("adjectives.txt")
            cls._noun_overrides = _load_wordlist("noun_overrides.txt")
            cls._irregulars = _load_irregulars()

    def tokenize(self, text: str) -> list[str]:
        return _TOKEN_RE.findall(text)

    def classify(self, token: str) -> str:
        word = token.casefold()
        if word in self._function_words:
            return POS_OTHER
        if "'" in word:
            return POS_OTHER
        if word.isdigit():
            return POS_OTHER
        if any(ch.isdigit() for ch in word):
            return POS_NOUN  # isotope-style tokens: cs-137, i131
        if word in self._noun_overrides:
            return POS_NOUN
        if word in self._adjectives:
            return POS_ADJECTIVE
        if "-" in word:
            return POS_ADJECTIVE  # compound modifiers: low-dose, long-term
        if word.endswith("ly") and len(word) > 3:
            return POS_OTHER
        if word.endswith("ed") and len(word) > 4 and not word.endswith("eed"):
            return POS_OTHER
        for suffix in _ADJ_SUFFIXES:
            if word.endswith(suffix) and len(word) > len(suffix) + 1:
                return POS_ADJECTIVE
        return POS_NOUN

    def lemmatize(self, token: str, pos: str) -> str:
        word = token.casefold()
        if pos != POS_NOUN:
            return word
        irregular = self._irregulars.get(word)
        if irregular is not None:
            return irregular
        if word.endswith("ics"):
            return word
        if word.endswith("ies") and len(word) > 4:
            return word[:-3] + "y"
        if word.endswith(("ches", "shes", "sses", "xes", "zes", "oes")):
            return word[:-2]
        if word.endswith("s") and not word.endswith(("ss", "us", "is")) and len(word) > 3:
            return word[:-1]
        return word

    def __call__(self, text: str) -> list[TaggedToken]:
        tokens = []
        for surface in self.tokenize(text):
            pos = self.classify(surface)
            tokens.append(TaggedToken(surface, self.lemmatize(surface, pos), pos))
        return tokens


def _map_pos(raw: str) -> str:
    name = raw.strip()
    lowered = name.lower()
    if lowered in (POS_NOUN, POS_ADJECTIVE, POS_OTHER):
        return lowered
    uppered = name.upper()
    if uppered.startswith(("NN", "NP")):
        return POS_NOUN
    if uppered.startswith("JJ"):
        return POS_ADJECTIVE
    return POS_OTHER


def read_pretagged(source) -> list[list[TaggedToken]]:
    """Read pre-tagged documents: ``surface TAB pos TAB lemma`` lines.

    Documents are separated by blank lines; a blank line directly after a
    separator marks an empty document (a record with no text in that
    field). Penn-style tags (NN*, NP*, JJ*) are mapped onto the contract's
    noun/adjective/other classes; unusable lemmas fall back to the
    lower-cased surface.
    """
    if isinstance(source, (str, Path)):
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = source.read()
    documents: list[list[TaggedToken]] = []
    current: list[TaggedToken] = []
    for line in text.splitlines():
        if not line.strip():
            documents.append(current)
            current = []
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ValueError(
                f"pretagged lines need 3 tab-separated fields, got {line!r}")
        surface, raw_pos, raw_lemma = (p.strip() for p in parts)
        lemma = raw_lemma.lower()
        if not lemma or lemma in ("<unknown>", "@card@"):
            lemma = surface.lower()
        current.append(TaggedToken(surface, lemma, _map_pos(raw_pos)))
    if current:
        documents.append(current)
    return documents
