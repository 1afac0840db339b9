"""Keyword co-occurrence network weighted by the equivalence index."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, Optional

from .keyword_norm import KeywordIndex

# Float comparisons between equivalence weights use this tolerance; ties are
# then broken on term names so rounding noise never changes structure.
WEIGHT_TOL = 1e-12

Pair = tuple[str, str]


class DomainError(ValueError):
    pass


def pair(a: str, b: str) -> Pair:
    """Unordered pair key: the two terms in ascending order."""
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class Edge:
    cooccurrence: int
    equivalence: float


@dataclass(frozen=True)
class CoWordNetwork:
    nodes: Mapping[str, int] = field(default_factory=dict)
    edges: Mapping[Pair, Edge] = field(default_factory=dict)
    min_frequency: int = 1

    def neighbors(self, term: str) -> dict[str, Edge]:
        out = {}
        for (a, b), e in self.edges.items():
            if a == term:
                out[b] = e
            elif b == term:
                out[a] = e
        return out

    def weight(self, a: str, b: str) -> float:
        edge = self.edges.get(pair(a, b))
        return 0.0 if edge is None else edge.equivalence

    def scaled(self, factor: float) -> "CoWordNetwork":
        """Copy with every equivalence weight multiplied by ``factor``."""
        edges = {p: Edge(e.cooccurrence, e.equivalence * factor) for p, e in self.edges.items()}
        return CoWordNetwork(dict(self.nodes), edges, self.min_frequency)


def prune_by_frequency(index: KeywordIndex, min_freq: int = 3) -> KeywordIndex:
    if min_freq < 1:
        raise ValueError("min_freq must be >= 1")
    return KeywordIndex({t: p for t, p in index.terms.items() if p.frequency >= min_freq})


def count_cooccurrences(index: KeywordIndex) -> dict[Pair, int]:
    """Number of documents shared by each pair of terms (pairs with none are omitted)."""
    by_doc: dict[int, list[str]] = {}
    for term in sorted(index.terms):
        for doc in index.terms[term].postings:
            by_doc.setdefault(doc, []).append(term)
    counts: dict[Pair, int] = {}
    for terms in by_doc.values():
        for a, b in combinations(terms, 2):
            counts[(a, b)] = counts.get((a, b), 0) + 1
    return dict(sorted(counts.items()))


def equivalence_index(c_ij: int, c_i: int, c_j: int) -> float:
    """c_ij^2 / (c_i * c_j)."""
    if c_i < 1 or c_j < 1 or c_ij < 0 or c_ij > c_i or c_ij > c_j:
        raise DomainError(f"invalid counts c_ij={c_ij}, c_i={c_i}, c_j={c_j}")
    return (c_ij * c_ij) / (c_i * c_j)


def build_network(
    index: KeywordIndex, min_freq: int = 3, min_cooccurrence: Optional[int] = None
) -> CoWordNetwork:
    """Prune by document frequency, then count and weight co-occurrences.

    ``min_cooccurrence`` is an optional edge cutoff and is off by default.
    """
    pruned = prune_by_frequency(index, min_freq)
    freqs = pruned.frequencies()
    edges = {}
    for (a, b), c in count_cooccurrences(pruned).items():
        if min_cooccurrence is not None and c < min_cooccurrence:
            continue
        edges[(a, b)] = Edge(c, equivalence_index(c, freqs[a], freqs[b]))
    return CoWordNetwork(dict(sorted(freqs.items())), edges, min_freq)
