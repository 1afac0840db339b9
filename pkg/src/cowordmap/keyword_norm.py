"""Keyword normalization and the keyword -> documents index."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .wos_ingest import Corpus

TRAILING_PUNCT = ".,;:"
_MAX_PASSES = 16


class ThesaurusError(ValueError):
    pass


class ChainDetected(ThesaurusError):
    def __init__(self, variant: str, canonical: str):
        self.pair = (variant, canonical)
        super().__init__(f"chained thesaurus entry: {variant!r} -> {canonical!r}")


class DuplicateVariant(ThesaurusError):
    def __init__(self, variant: str, first: str, second: str):
        self.variant = variant
        super().__init__(f"variant {variant!r} maps to both {first!r} and {second!r}")


@dataclass(frozen=True)
class Thesaurus:
    entries: Mapping[str, str] = field(default_factory=dict)

    @property
    def canonicals(self) -> frozenset[str]:
        return frozenset(self.entries.values())

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class NormalizationRules:
    case_fold: bool = True
    trim_and_collapse_whitespace: bool = True
    strip_trailing_punctuation: bool = True
    merge_plurals: bool = True
    thesaurus: Optional[Thesaurus] = None


@dataclass(frozen=True)
class Posting:
    postings: tuple[int, ...]

    @property
    def frequency(self) -> int:
        return len(self.postings)


@dataclass(frozen=True)
class KeywordIndex:
    terms: Mapping[str, Posting] = field(default_factory=dict)

    def frequency(self, term: str) -> int:
        return self.terms[term].frequency

    def postings(self, term: str) -> tuple[int, ...]:
        return self.terms[term].postings

    def frequencies(self) -> dict[str, int]:
        return {t: p.frequency for t, p in self.terms.items()}

    def __contains__(self, term: object) -> bool:
        return term in self.terms

    def __len__(self) -> int:
        return len(self.terms)


def _clean(text: str) -> str:
    return " ".join(text.split())


def load_thesaurus(data: bytes) -> Thesaurus:
    """Load ``variant<TAB>canonical`` lines; ``#`` starts a comment line.

    Variants and canonicals are case-folded and whitespace-collapsed. A
    canonical that is also a variant of something else is rejected.
    """
    entries: dict[str, str] = {}
    for raw in data.decode("utf-8-sig").split("\n"):
        line = raw.strip("\r")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        if "\t" not in line:
            raise ThesaurusError(f"expected variant<TAB>canonical, got {line!r}")
        variant, canonical = (_clean(part).casefold() for part in line.split("\t", 1))
        if not variant or not canonical:
            raise ThesaurusError(f"empty variant or canonical in {line!r}")
        if variant in entries and entries[variant] != canonical:
            raise DuplicateVariant(variant, entries[variant], canonical)
        entries[variant] = canonical

    for variant, canonical in entries.items():
        if canonical in entries and entries[canonical] != canonical:
            raise ChainDetected(variant, canonical)
    return Thesaurus(dict(sorted(entries.items())))


def _surface(raw: str, rules: NormalizationRules) -> str:
    term = raw
    if rules.trim_and_collapse_whitespace:
        term = _clean(term)
    if rules.case_fold:
        term = term.casefold()
    if rules.strip_trailing_punctuation:
        end = len(term)
        strip_space = rules.trim_and_collapse_whitespace
        while end and (term[end - 1] in TRAILING_PUNCT or (strip_space and term[end - 1].isspace())):
            end -= 1
        term = term[:end]
    return term


def _singular(term: str, vocabulary: frozenset[str]) -> str:
    if term.endswith("ies") and term[:-3] + "y" in vocabulary:
        return term[:-3] + "y"
    if term.endswith("s") and term[:-1] in vocabulary:
        return term[:-1]
    return term


def normalize_term(
    raw: str,
    rules: NormalizationRules = NormalizationRules(),
    vocabulary: Optional[Iterable[str]] = None,
) -> Optional[str]:
    """Canonical form of ``raw`` or ``None`` when nothing is left.

    Steps: whitespace, case fold, trailing punctuation, thesaurus, plural
    merge. Plural merging needs the corpus vocabulary (surface forms of all
    keywords); without one, plurals are kept as they are. The chain is
    repeated until it reaches a fixed point, so the result is idempotent.
    """
    vocab = frozenset(vocabulary or ())
    if rules.thesaurus is not None:
        vocab |= rules.thesaurus.canonicals
    thesaurus = rules.thesaurus.entries if rules.thesaurus is not None else {}

    term = raw
    seen = set()
    for _ in range(_MAX_PASSES):
        nxt = _surface(term, rules)
        nxt = thesaurus.get(nxt, nxt)
        if rules.merge_plurals and vocab:
            nxt = _singular(nxt, vocab)
        if nxt == term or nxt in seen:
            term = nxt
            break
        seen.add(term)
        term = nxt
    return term or None


def keyword_field(record, which: str) -> tuple[str, ...]:
    if which in ("author", "author_keywords", "DE"):
        return record.author_keywords
    if which in ("plus", "keywords_plus", "ID"):
        return record.keywords_plus
    raise ValueError(f"unknown keyword field {which!r}")


def corpus_vocabulary(corpus: Corpus, which: str, rules: NormalizationRules) -> frozenset[str]:
    """First pass: every surface form (pre-thesaurus, pre-plural) in the corpus."""
    vocab = set()
    thesaurus = rules.thesaurus.entries if rules.thesaurus is not None else {}
    for rec in corpus.records:
        for kw in keyword_field(rec, which):
            term = _surface(kw, rules)
            if term:
                vocab.add(term)
                vocab.add(thesaurus.get(term, term))
    return frozenset(vocab)


def build_index(
    corpus: Corpus, which: str = "author", rules: NormalizationRules = NormalizationRules()
) -> KeywordIndex:
    """Normalize every keyword of the chosen field and collect document postings.

    Two passes: the vocabulary is collected first because the plural merge
    depends on which singular forms occur anywhere in the corpus.
    """
    vocab = corpus_vocabulary(corpus, which, rules) if rules.merge_plurals else frozenset()
    cache: dict[str, Optional[str]] = {}
    postings: dict[str, list[int]] = {}
    for ordinal, rec in enumerate(corpus.records):
        for kw in keyword_field(rec, which):
            if kw not in cache:
                cache[kw] = normalize_term(kw, rules, vocab)
            term = cache[kw]
            if term is None:
                continue
            docs = postings.setdefault(term, [])
            if not docs or docs[-1] != ordinal:
                docs.append(ordinal)
    return KeywordIndex({t: Posting(tuple(docs)) for t, docs in sorted(postings.items())})


def rank_keywords(index: KeywordIndex, top_n: int = 20) -> list[tuple[str, int]]:
    """Most frequent terms first; equal frequencies in ascending term order."""
    if top_n < 1:
        raise ValueError("top_n must be >= 1")
    ranking = sorted(index.frequencies().items(), key=lambda kv: (-kv[1], kv[0]))
    return ranking[:top_n]
