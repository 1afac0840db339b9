import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from conftest import corpus_from_keywords
from cowordmap.coword_net import CoWordNetwork, Edge, build_network
from cowordmap.keyword_norm import build_index
from cowordmap.theme_cluster import (
    ClusterParams,
    Theme,
    label_theme,
    simple_centers,
    sorted_edges,
    theme_doc_count,
)


@pytest.fixture
def m6_index(m6):
    return build_index(m6)


@pytest.fixture
def m6_net(m6_index):
    return build_network(m6_index, 2)


def by_members(themes):
    return {t.members: t for t in themes}


def test_m6_clustering_min2_max3(m6_net):
    themes, residual = simple_centers(m6_net, ClusterParams(2, 3))
    assert residual == frozenset()
    got = by_members(themes)
    a = got[("chatgpt", "generative ai")]
    b = got[("ai", "ethics", "journalism")]
    assert a.external_strength == pytest.approx(0.25, abs=1e-12)
    assert b.external_strength == pytest.approx(0.25, abs=1e-12)
    assert a.internal_strength == pytest.approx(1.0, abs=1e-12)
    assert b.internal_strength == pytest.approx(1 / 3 + 1 / 3 + 4 / 9, abs=1e-12)
    assert set(b.internal_edges) == {("ai", "ethics"), ("ai", "journalism"), ("ethics", "journalism")}
    assert (a.label, b.label) == ("chatgpt", "ethics")
    # seed order: the strongest edge founds theme 1
    assert (a.id, b.id) == (1, 2)


def test_m6_clustering_min3_dissolves_small_theme(m6_net):
    themes, residual = simple_centers(m6_net, ClusterParams(3, 3))
    assert residual == {"chatgpt", "generative ai"}
    assert [t.members for t in themes] == [("ai", "ethics", "journalism")]
    # links into residual terms still leave the theme
    assert themes[0].external_strength == pytest.approx(0.25)
    assert themes[0].id == 1


def test_empty_network():
    assert simple_centers(CoWordNetwork(), ClusterParams()) == ([], frozenset())


def test_isolated_nodes_are_residual():
    net = CoWordNetwork({"a": 3, "b": 3, "c": 3}, {("a", "b"): Edge(3, 1.0)})
    themes, residual = simple_centers(net, ClusterParams(2, 3))
    assert [t.members for t in themes] == [("a", "b")]
    assert residual == {"c"}


def test_max_theme_size_blocks_growth():
    net = CoWordNetwork(
        {"a": 2, "b": 2, "c": 2},
        {("a", "b"): Edge(2, 1.0), ("a", "c"): Edge(1, 0.25)},
    )
    themes, residual = simple_centers(net, ClusterParams(2, 2))
    assert [t.members for t in themes] == [("a", "b")]
    assert residual == {"c"}
    assert themes[0].external_strength == pytest.approx(0.25)


def test_max_themes_caps_seeding(m6_net):
    themes, residual = simple_centers(m6_net, ClusterParams(2, 3, max_themes=1))
    assert [t.members for t in themes] == [("ai", "chatgpt", "generative ai")]
    assert residual == {"ethics", "journalism"}


def test_edge_sort_order():
    net = CoWordNetwork(
        {"a": 4, "b": 4, "c": 1, "d": 1, "e": 4, "f": 4},
        {
            ("c", "d"): Edge(1, 1.0),
            ("a", "b"): Edge(4, 1.0),
            ("e", "f"): Edge(2, 0.25),
            ("a", "e"): Edge(2, 0.25),
        },
    )
    # equal weights: higher co-occurrence first, then pair name
    assert [p for p, _ in sorted_edges(net)] == [("a", "b"), ("c", "d"), ("a", "e"), ("e", "f")]


def test_params_validation():
    with pytest.raises(ValueError):
        ClusterParams(0, 3)
    with pytest.raises(ValueError):
        ClusterParams(4, 3)


def test_labels(m6_net):
    themes, _ = simple_centers(m6_net, ClusterParams(2, 3))
    labels = {t.members: label_theme(t) for t in themes}
    assert labels[("ai", "ethics", "journalism")] == "ethics"
    assert labels[("chatgpt", "generative ai")] == "chatgpt"


def test_label_prefers_strength_then_frequency():
    t = Theme(1, ("x", "y", "z"), "", {("x", "y"): 0.5, ("y", "z"): 0.5}, 0.0, {"x": 1, "y": 1, "z": 1})
    assert label_theme(t) == "y"
    t = Theme(1, ("x", "y"), "", {("x", "y"): 0.5}, 0.0, {"x": 1, "y": 7})
    assert label_theme(t) == "y"
    single = Theme(1, ("solo",), "", {}, 0.0, {"solo": 2})
    assert label_theme(single) == "solo"


def test_doc_counts(m6_net, m6_index):
    themes = by_members(simple_centers(m6_net, ClusterParams(2, 3))[0])
    b = themes[("ai", "ethics", "journalism")]
    a = themes[("chatgpt", "generative ai")]
    assert theme_doc_count(b, m6_index, "any_member") == 5
    assert theme_doc_count(b, m6_index, "freq_sum") == 10
    assert theme_doc_count(a, m6_index) == 2
    one = Theme(9, ("ethics",), "ethics", {}, 0.0)
    assert theme_doc_count(one, m6_index) == 3
    with pytest.raises(ValueError):
        theme_doc_count(b, m6_index, "bogus")


# -- properties ---------------------------------------------------------------

_docs = st.lists(
    st.sets(st.sampled_from([f"k{i:02d}" for i in range(14)]), max_size=6).map(sorted),
    min_size=1,
    max_size=12,
)
_params = st.tuples(st.integers(1, 4), st.integers(0, 6)).map(lambda t: ClusterParams(t[0], t[0] + t[1]))


@settings(max_examples=300, deadline=None)
@given(_docs, st.integers(1, 3), _params)
def test_partition_and_bounds(docs, min_freq, params):
    index = build_index(corpus_from_keywords(docs))
    net = build_network(index, min_freq)
    themes, residual = simple_centers(net, params)
    seen = set()
    for t in themes:
        assert params.min_theme_size <= len(t.members) <= params.max_theme_size
        assert t.label in t.members
        assert not seen & set(t.members)
        seen |= set(t.members)
        inside = set(t.members)
        # sums recomputed straight from the network
        internal = {p: e.equivalence for p, e in net.edges.items() if p[0] in inside and p[1] in inside}
        external = sum(e.equivalence for p, e in net.edges.items() if (p[0] in inside) != (p[1] in inside))
        assert dict(t.internal_edges) == internal
        assert t.external_strength == pytest.approx(external, abs=1e-12)
        anym = theme_doc_count(t, index, "any_member")
        assert anym <= len(docs)
        assert theme_doc_count(t, index, "freq_sum") >= anym
    assert seen.isdisjoint(residual)
    assert seen | residual == set(net.nodes)
    assert simple_centers(net, params) == (themes, residual)


@settings(max_examples=200, deadline=None)
@given(_docs, st.integers(1, 3), st.integers(2, 6))
def test_strongest_edge_is_internal(docs, min_freq, max_size):
    net = build_network(build_index(corpus_from_keywords(docs)), min_freq)
    assume(net.edges)
    themes, _ = simple_centers(net, ClusterParams(2, max_size))
    strongest = sorted_edges(net)[0][0]
    assert any(strongest in t.internal_edges for t in themes)
