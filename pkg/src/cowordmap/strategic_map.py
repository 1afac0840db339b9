"""Callon centrality/density, quadrant placement and field-level category."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from statistics import median
from typing import Iterable, Mapping, Optional, Sequence, Union

from .coword_net import CoWordNetwork
from .keyword_norm import KeywordIndex
from .theme_cluster import Theme, theme_doc_count

QUADRANTS = ("Q1", "Q2", "Q3", "Q4")
QUADRANT_NAMES = {"Q1": "Motor", "Q2": "Basic", "Q3": "Niche", "Q4": "Emerging"}
CATEGORIES = ("Cat1", "Cat2", "Cat3")
TERMINAL = "terminal"

# Circular path of a theme across the diagram: born emerging, then basic,
# motor, and finally niche.
_NEXT_QUADRANT = {"Q4": "Q2", "Q2": "Q1", "Q1": "Q3", "Q3": TERMINAL}

# Relative tolerance for the >= test against the origin, so a theme sitting on
# an axis is not pushed to the wrong side by rounding in the mean.
AXIS_TOL = 1e-12

Origin = tuple[float, float]
OriginMode = Union[str, Origin]


class EmptyMap(ValueError):
    pass


@dataclass(frozen=True)
class ThemeMetrics:
    theme_id: int
    centrality: float
    density: float
    quadrant: str = ""


@dataclass(frozen=True)
class StrategicMap:
    themes: tuple[tuple[Theme, ThemeMetrics], ...]
    origin: Origin
    origin_mode: str
    category: str
    quadrant_counts: Mapping[str, int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.themes)


def callon_centrality(theme: Theme) -> float:
    return 10.0 * theme.external_strength


def callon_density(theme: Theme) -> float:
    """100 x internal link sum / number of keywords in the theme."""
    if not theme.members:
        raise ValueError("theme has no members")
    return 100.0 * theme.internal_strength / len(theme.members)


def compute_origin(metrics: Sequence[ThemeMetrics], mode: OriginMode = "median") -> Origin:
    """Axis origin: componentwise median or mean, or an explicit ``(c, d)`` pair."""
    if not isinstance(mode, str):
        c, d = mode
        return float(c), float(d)
    if mode not in ("median", "mean"):
        raise ValueError(f"unknown origin mode {mode!r}")
    if not metrics:
        raise EmptyMap(f"{mode} origin needs at least one theme")
    cs = [m.centrality for m in metrics]
    ds = [m.density for m in metrics]
    if mode == "median":
        return float(median(cs)), float(median(ds))
    return math.fsum(cs) / len(cs), math.fsum(ds) / len(ds)


def _at_or_above(value: float, axis: float) -> bool:
    return value >= axis or math.isclose(value, axis, rel_tol=AXIS_TOL, abs_tol=AXIS_TOL)


def classify_quadrant(centrality: float, density: float, origin: Origin) -> str:
    """Q1 motor, Q2 basic, Q3 niche, Q4 emerging; ties on an axis go right/up."""
    right = _at_or_above(centrality, origin[0])
    top = _at_or_above(density, origin[1])
    if right:
        return "Q1" if top else "Q2"
    return "Q3" if top else "Q4"


def quadrant_counts(quadrants: Iterable[str]) -> dict[str, int]:
    counts = {q: 0 for q in QUADRANTS}
    for q in quadrants:
        counts[q] += 1
    return counts


def classify_category(counts: Mapping[str, int], dominance: Fraction | float = Fraction(2, 3)) -> str:
    """Field structure from quadrant occupancy.

    Cat1 when the first bisector (Q1 + Q4) holds at least ``dominance`` of
    the themes, Cat2 when the second bisector (Q2 + Q3) does, else Cat3.
    """
    n = sum(counts.get(q, 0) for q in QUADRANTS)
    if n < 1:
        raise EmptyMap("category needs at least one theme")
    dominance = Fraction(dominance).limit_denominator(10**6)
    if counts.get("Q1", 0) + counts.get("Q4", 0) >= dominance * n:
        return "Cat1"
    if counts.get("Q2", 0) + counts.get("Q3", 0) >= dominance * n:
        return "Cat2"
    return "Cat3"


def predict_trajectory(quadrant: str) -> str:
    if quadrant == TERMINAL:
        return TERMINAL
    try:
        return _NEXT_QUADRANT[quadrant]
    except KeyError:
        raise ValueError(f"unknown quadrant {quadrant!r}") from None


def _assemble(
    themes: Sequence[Theme], metrics: Sequence[ThemeMetrics], origin_mode: OriginMode
) -> StrategicMap:
    if not themes:
        raise EmptyMap("no themes to place on the strategic diagram")
    origin = compute_origin(metrics, origin_mode)
    placed = [
        (t, replace(m, quadrant=classify_quadrant(m.centrality, m.density, origin)))
        for t, m in zip(themes, metrics)
    ]
    placed.sort(key=lambda tm: (-tm[0].doc_count, tm[0].label, tm[0].id))
    counts = quadrant_counts(m.quadrant for _, m in placed)
    mode_name = origin_mode if isinstance(origin_mode, str) else "explicit"
    return StrategicMap(tuple(placed), origin, mode_name, classify_category(counts), counts)


def build_strategic_map(
    themes: Sequence[Theme],
    network: Optional[CoWordNetwork] = None,
    index: Optional[KeywordIndex] = None,
    origin_mode: OriginMode = "median",
    doc_count_mode: str = "any_member",
) -> StrategicMap:
    """Place clustered themes on the centrality/density diagram.

    Themes must come from clustering ``network``; when ``index`` is given the
    document counts are (re)computed from it. Output is ordered by document
    count, largest first, then label.
    """
    if network is not None:
        unknown = {m for t in themes for m in t.members} - set(network.nodes)
        if unknown:
            raise ValueError(f"themes reference terms missing from the network: {sorted(unknown)}")
    if index is not None:
        themes = [replace(t, doc_count=theme_doc_count(t, index, doc_count_mode)) for t in themes]
    metrics = [ThemeMetrics(t.id, callon_centrality(t), callon_density(t)) for t in themes]
    return _assemble(themes, metrics, origin_mode)


def map_from_metrics(
    rows: Iterable[Mapping], origin_mode: OriginMode = "median"
) -> StrategicMap:
    """Strategic map from already-computed metrics, skipping clustering.

    Each row needs ``label``, ``centrality`` and ``density``; ``doc_count``
    and ``members`` are optional. Useful for re-plotting published tables.
    """
    themes, metrics = [], []
    for i, row in enumerate(rows, start=1):
        label = row["label"]
        members = tuple(row.get("members") or (label,))
        themes.append(
            Theme(
                id=i,
                members=members,
                label=label,
                internal_edges={},
                external_strength=float(row["centrality"]) / 10.0,
                member_freqs=dict(row.get("member_freqs") or {}),
                doc_count=int(row.get("doc_count", 0)),
            )
        )
        metrics.append(ThemeMetrics(i, float(row["centrality"]), float(row["density"])))
    return _assemble(themes, metrics, origin_mode)
