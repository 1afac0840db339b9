
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import corpus_from_keywords
from cowordmap.keyword_norm import (
    ChainDetected,
    DuplicateVariant,
    NormalizationRules,
    Thesaurus,
    build_index,
    corpus_vocabulary,
    load_thesaurus,
    normalize_term,
    rank_keywords,
)
from cowordmap.wos_ingest import Corpus, Record

RULES = NormalizationRules()


@pytest.mark.parametrize(
    "raw, expected",
    [
        ("  Artificial  Intelligence ", "artificial intelligence"),
        ("Journalism.", "journalism"),
        ("ethics;:", "ethics"),
        ("big data ,", "big data"),
        ("   ", None),
        ("...", None),
        ("fact-checking", "fact-checking"),
    ],
)
def test_normalize_surface(raw, expected):
    assert normalize_term(raw, RULES) == expected


def test_plural_merges_only_with_singular_in_vocabulary():
    assert normalize_term("algorithms", RULES, {"algorithm"}) == "algorithm"
    assert normalize_term("Algorithms", RULES, {"algorithm", "algorithms"}) == "algorithm"
    assert normalize_term("algorithms", RULES, {"algorithms"}) == "algorithms"
    assert normalize_term("ethics", RULES, {"ethics", "ethical"}) == "ethics"
    assert normalize_term("technologies", RULES, {"technology"}) == "technology"
    no_merge = NormalizationRules(merge_plurals=False)
    assert normalize_term("algorithms", no_merge, {"algorithm"}) == "algorithms"


def test_ai_stays_distinct_from_artificial_intelligence():
    th = Thesaurus({"ai": "ai"})
    rules = NormalizationRules(thesaurus=th)
    assert normalize_term("AI", rules) == "ai"
    assert normalize_term("AI", RULES, {"artificial intelligence"}) == "ai"


def test_thesaurus_lookup_after_casefold():
    th = load_thesaurus(b"Chat-GPT\tChatGPT\n")
    assert th.entries == {"chat-gpt": "chatgpt"}
    assert normalize_term("CHAT-GPT.", NormalizationRules(thesaurus=th)) == "chatgpt"


def test_thesaurus_canonical_counts_for_plural_merge():
    th = load_thesaurus(b"bot\tchatbot\n")
    rules = NormalizationRules(thesaurus=th)
    assert normalize_term("chatbots", rules, set()) == "chatbot"
    # plural stripped to a variant, then mapped by the thesaurus
    assert normalize_term("bots", rules, {"bot"}) == "chatbot"


def test_load_thesaurus_formats():
    th = load_thesaurus(b"# comment\n\nchat-gpt\tchatgpt\r\nA.I.\tai\n")
    assert th.entries == {"a.i.": "ai", "chat-gpt": "chatgpt"}
    assert load_thesaurus(b"").entries == {}


def test_load_thesaurus_rejects_chain():
    with pytest.raises(ChainDetected) as err:
        load_thesaurus(b"a\tb\nb\tc\n")
    assert err.value.pair == ("a", "b")


def test_load_thesaurus_rejects_conflicting_duplicates():
    with pytest.raises(DuplicateVariant):
        load_thesaurus(b"x\ty\nx\tz\n")
    # repeating an identical entry is fine
    assert load_thesaurus(b"x\ty\nX\tY\n").entries == {"x": "y"}


def test_build_index_m6(m6):
    index = build_index(m6)
    assert index.frequencies() == {
        "ai": 4,
        "chatgpt": 2,
        "ethics": 3,
        "generative ai": 2,
        "journalism": 3,
    }
    assert index.postings("ethics") == (1, 2, 5)


def test_build_index_in_document_dedupe():
    index = build_index(corpus_from_keywords([["AI", "ai", "Ai."]]))
    assert index.frequencies() == {"ai": 1}
    assert index.postings("ai") == (0,)


def test_build_index_empty():
    assert len(build_index(Corpus())) == 0


def test_build_index_plural_two_pass():
    # the singular appears only in a later document
    corpus = corpus_from_keywords([["Algorithms"], ["news"], ["algorithm", "algorithms"]])
    index = build_index(corpus)
    assert index.frequencies() == {"algorithm": 2, "news": 1}


def test_build_index_keywords_plus():
    corpus = Corpus((Record(author_keywords=("x",), keywords_plus=("NEWS", "MEDIA")),))
    assert set(build_index(corpus, "plus").terms) == {"news", "media"}
    with pytest.raises(ValueError):
        build_index(corpus, "title")


def test_rank_keywords_m6(m6):
    index = build_index(m6)
    assert rank_keywords(index, 3) == [("ai", 4), ("ethics", 3), ("journalism", 3)]
    assert len(rank_keywords(index, 100)) == 5
    with pytest.raises(ValueError):
        rank_keywords(index, 0)


# -- properties ---------------------------------------------------------------

_raw = st.lists(st.sampled_from(list("abcsyie .,;:-AB\t") + ["ies", "  "]), max_size=8).map("".join)


@settings(max_examples=400, deadline=None)
@given(_raw, st.sets(_raw, max_size=6))
def test_normalize_idempotent(raw, vocab_raw):
    vocab = {v for v in (normalize_term(x, NormalizationRules(merge_plurals=False)) for x in vocab_raw) if v}
    once = normalize_term(raw, RULES, vocab)
    if once is not None:
        assert normalize_term(once, RULES, vocab) == once


@settings(max_examples=300, deadline=None)
@given(st.text(max_size=20))
def test_normalize_idempotent_any_text(raw):
    once = normalize_term(raw, RULES)
    if once is not None:
        assert normalize_term(once, RULES) == once


_docs = st.lists(st.lists(st.sampled_from(["AI", "ai", "Ethics", "ethic", "bots", "bot", "news", "data"]), max_size=4), max_size=8)


@settings(max_examples=200, deadline=None)
@given(_docs, st.randoms(use_true_random=False))
def test_index_invariants_and_permutation(docs, rnd):
    corpus = corpus_from_keywords(docs)
    index = build_index(corpus)
    for term, posting in index.terms.items():
        assert posting.frequency == len(posting.postings) <= len(docs)
        assert list(posting.postings) == sorted(set(posting.postings))
        assert all(0 <= d < len(docs) for d in posting.postings)
    pairs = {(d, normalize_term(k, RULES, corpus_vocabulary(corpus, "author", RULES))) for d, kws in enumerate(docs) for k in kws}
    assert sum(p.frequency for p in index.terms.values()) == len(pairs)

    shuffled = list(docs)
    rnd.shuffle(shuffled)
    other = build_index(corpus_from_keywords(shuffled))
    assert other.frequencies() == index.frequencies()
    assert rank_keywords(other, 50) == rank_keywords(index, 50)
