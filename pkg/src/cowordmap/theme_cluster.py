"""Simple-centers clustering of a co-word network into themes.

The scan is a single pass over edges sorted by decreasing equivalence:

1. an edge between two unassigned terms seeds a new theme,
2. an edge from a theme to an unassigned term pulls that term in while
   the theme is below ``max_theme_size``,
3. themes that end up smaller than ``min_theme_size`` are dissolved and
   their terms go to the residual set.

Internal and external link sums are computed from the final partition. A
theme's external links are all edges with exactly one endpoint inside it.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cmp_to_key
from typing import Mapping, Optional

from .coword_net import WEIGHT_TOL, CoWordNetwork, Edge, Pair
from .keyword_norm import KeywordIndex

DOC_COUNT_MODES = ("any_member", "freq_sum")


@dataclass(frozen=True)
class ClusterParams:
    min_theme_size: int = 3
    max_theme_size: int = 10
    max_themes: Optional[int] = None

    def __post_init__(self):
        if not 1 <= self.min_theme_size <= self.max_theme_size:
            raise ValueError(
                f"need 1 <= min_theme_size <= max_theme_size, got "
                f"{self.min_theme_size}, {self.max_theme_size}"
            )
        if self.max_themes is not None and self.max_themes < 0:
            raise ValueError("max_themes must be non-negative")


@dataclass(frozen=True)
class Theme:
    id: int
    members: tuple[str, ...]
    label: str
    internal_edges: Mapping[Pair, float]
    external_strength: float
    member_freqs: Mapping[str, int] = field(default_factory=dict)
    doc_count: int = 0

    @property
    def freq_sum(self) -> int:
        return sum(self.member_freqs.values())

    @property
    def internal_strength(self) -> float:
        return sum(self.internal_edges.values())

    def __len__(self) -> int:
        return len(self.members)


def _weight_desc(x: float, y: float) -> int:
    if abs(x - y) <= WEIGHT_TOL:
        return 0
    return -1 if x > y else 1


def _edge_order(a: tuple[Pair, Edge], b: tuple[Pair, Edge]) -> int:
    (pa, ea), (pb, eb) = a, b
    return (
        _weight_desc(ea.equivalence, eb.equivalence)
        or (eb.cooccurrence > ea.cooccurrence) - (eb.cooccurrence < ea.cooccurrence)
        or (pa > pb) - (pa < pb)
    )


def sorted_edges(network: CoWordNetwork) -> list[tuple[Pair, Edge]]:
    """Edges by equivalence descending, then higher co-occurrence, then pair name."""
    return sorted(network.edges.items(), key=cmp_to_key(_edge_order))


def member_strengths(theme: Theme) -> dict[str, float]:
    strength = {m: 0.0 for m in theme.members}
    for (a, b), w in theme.internal_edges.items():
        strength[a] += w
        strength[b] += w
    return strength


def label_theme(theme: Theme) -> str:
    """Member with the largest internal link sum (then frequency, then name)."""
    strength = member_strengths(theme)
    freqs = theme.member_freqs

    def order(x: str, y: str) -> int:
        return (
            _weight_desc(strength[x], strength[y])
            or freqs.get(y, 0) - freqs.get(x, 0)
            or (x > y) - (x < y)
        )

    return min(theme.members, key=cmp_to_key(order))


def _make_theme(theme_id: int, members: list[str], network: CoWordNetwork) -> Theme:
    inside = set(members)
    internal: dict[Pair, float] = {}
    external = 0.0
    for (a, b), e in network.edges.items():
        if a in inside and b in inside:
            internal[(a, b)] = e.equivalence
        elif a in inside or b in inside:
            external += e.equivalence
    theme = Theme(
        id=theme_id,
        members=tuple(sorted(members)),
        label="",
        internal_edges=internal,
        external_strength=external,
        member_freqs={m: network.nodes[m] for m in sorted(members)},
    )
    return replace(theme, label=label_theme(theme))


def simple_centers(
    network: CoWordNetwork, params: ClusterParams = ClusterParams()
) -> tuple[list[Theme], frozenset[str]]:
    """Partition ``network`` into themes; returns ``(themes, residual_terms)``."""
    assigned: dict[str, int] = {}
    groups: list[list[str]] = []
    for (a, b), _ in sorted_edges(network):
        ta, tb = assigned.get(a), assigned.get(b)
        if ta is None and tb is None:
            if params.max_themes is not None and len(groups) >= params.max_themes:
                continue
            seed = [a, b][: params.max_theme_size]
            for term in seed:
                assigned[term] = len(groups)
            groups.append(seed)
        elif ta is None or tb is None:
            target, newcomer = (tb, a) if ta is None else (ta, b)
            if len(groups[target]) < params.max_theme_size:
                groups[target].append(newcomer)
                assigned[newcomer] = target

    kept = [g for g in groups if len(g) >= params.min_theme_size]
    themes = [_make_theme(i, g, network) for i, g in enumerate(kept, start=1)]
    clustered = {m for t in themes for m in t.members}
    residual = frozenset(t for t in network.nodes if t not in clustered)
    return themes, residual


def theme_doc_count(theme: Theme, index: KeywordIndex, mode: str = "any_member") -> int:
    """Documents linked to a theme.

    ``any_member`` counts distinct documents carrying at least one member;
    ``freq_sum`` adds up member frequencies (documents may count repeatedly).
    """
    if mode == "any_member":
        docs: set[int] = set()
        for m in theme.members:
            docs.update(index.postings(m))
        return len(docs)
    if mode == "freq_sum":
        return sum(index.frequency(m) for m in theme.members)
    raise ValueError(f"unknown doc count mode {mode!r}")
