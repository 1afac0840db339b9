"""Exporters: JSON report, CSV tables, Graphviz DOT and an SVG strategic diagram.

Every exporter is a pure function returning bytes, so equal inputs give
byte-identical files.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Optional, Sequence
from xml.sax.saxutils import escape

from .coword_net import CoWordNetwork
from .strategic_map import QUADRANT_NAMES, EmptyMap, StrategicMap, predict_trajectory
from .theme_cluster import Theme

REPORT_THEME_FIELDS = (
    "label", "members", "doc_count", "freq_sum", "centrality", "density", "quadrant", "trajectory_next",
)


@dataclass(frozen=True)
class RenderOptions:
    width_px: int = 900
    height_px: int = 700
    min_radius_px: int = 10
    max_radius_px: int = 60
    show_labels: bool = True
    decimal_places: int = 2
    margin_px: int = 70

    def __post_init__(self):
        if self.width_px <= 0 or self.height_px <= 0:
            raise ValueError("dimensions must be positive")
        if not 0 < self.min_radius_px < self.max_radius_px:
            raise ValueError("need 0 < min_radius_px < max_radius_px")
        if self.decimal_places < 0:
            raise ValueError("decimal_places must be >= 0")


# -- JSON -------------------------------------------------------------------


def map_report(smap: StrategicMap) -> dict:
    """Plain-data summary of a strategic map (the JSON report payload)."""
    themes = []
    for theme, m in smap.themes:
        themes.append(
            {
                "label": theme.label,
                "members": list(theme.members),
                "doc_count": theme.doc_count,
                "freq_sum": theme.freq_sum,
                "centrality": m.centrality,
                "density": m.density,
                "quadrant": m.quadrant,
                "trajectory_next": predict_trajectory(m.quadrant),
            }
        )
    return {
        "category": smap.category,
        "origin": {"centrality": smap.origin[0], "density": smap.origin[1]},
        "origin_mode": smap.origin_mode,
        "themes": themes,
    }


def export_report_json(smap: StrategicMap) -> bytes:
    text = json.dumps(map_report(smap), sort_keys=True, indent=2, ensure_ascii=False)
    return (text + "\n").encode("utf-8")


def read_report_json(data: bytes) -> dict:
    """Parse a JSON report back into the :func:`map_report` structure."""
    report = json.loads(data.decode("utf-8"))
    missing = {"category", "origin", "origin_mode", "themes"} - report.keys()
    if missing:
        raise ValueError(f"report is missing keys: {sorted(missing)}")
    for row in report["themes"]:
        absent = set(REPORT_THEME_FIELDS) - row.keys()
        if absent:
            raise ValueError(f"theme entry is missing keys: {sorted(absent)}")
    return report


# -- CSV --------------------------------------------------------------------


def _csv_bytes(header: Sequence[str], rows: Sequence[Sequence]) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue().encode("utf-8")


def _num(x) -> str:
    return repr(x) if isinstance(x, float) else str(x)


def themes_csv(smap: StrategicMap) -> bytes:
    rows = []
    for entry in map_report(smap)["themes"]:
        rows.append(
            [
                entry["label"],
                "; ".join(entry["members"]),
                entry["doc_count"],
                entry["freq_sum"],
                _num(entry["centrality"]),
                _num(entry["density"]),
                entry["quadrant"],
                entry["trajectory_next"],
            ]
        )
    return _csv_bytes(REPORT_THEME_FIELDS, rows)


def ranking_csv(ranking: Sequence[tuple[str, int]]) -> bytes:
    return _csv_bytes(("keyword", "frequency"), [(t, f) for t, f in ranking])


def edges_csv(network: CoWordNetwork) -> bytes:
    rows = [(a, b, e.cooccurrence, _num(e.equivalence)) for (a, b), e in sorted(network.edges.items())]
    return _csv_bytes(("source", "target", "cooccurrence", "equivalence"), rows)


def export_csv(obj) -> bytes:
    """CSV for a strategic map, a co-word network or a keyword ranking."""
    if isinstance(obj, StrategicMap):
        return themes_csv(obj)
    if isinstance(obj, CoWordNetwork):
        return edges_csv(obj)
    return ranking_csv(obj)


# -- DOT --------------------------------------------------------------------


def _dot_id(term: str) -> str:
    return '"' + term.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_network_dot(network: CoWordNetwork, themes: Optional[Sequence[Theme]] = None) -> bytes:
    """Undirected Graphviz graph; cross-theme edges are dashed when themes are given.

    Nodes outside every theme get ``theme=0``.
    """
    membership = {}
    if themes is not None:
        membership = {m: t.id for t in themes for m in t.members}
    lines = ["graph coword {"]
    for term in sorted(network.nodes):
        attrs = [f"freq={network.nodes[term]}"]
        if themes is not None:
            attrs.append(f"theme={membership.get(term, 0)}")
        lines.append(f"  {_dot_id(term)} [{', '.join(attrs)}];")
    for (a, b), e in sorted(network.edges.items()):
        attrs = [f"cooc={e.cooccurrence}", f"weight={_num(e.equivalence)}"]
        ta, tb = membership.get(a), membership.get(b)
        if ta is not None and tb is not None and ta != tb:
            attrs.append("style=dashed")
        lines.append(f"  {_dot_id(a)} -- {_dot_id(b)} [{', '.join(attrs)}];")
    lines.append("}")
    return ("\n".join(lines) + "\n").encode("utf-8")


# -- SVG --------------------------------------------------------------------


def circle_radii(doc_counts: Sequence[int], opts: RenderOptions = RenderOptions()) -> list[float]:
    """Radii whose areas are an affine function of the document counts.

    The smallest count gets ``min_radius_px`` and the largest
    ``max_radius_px``; when all counts are equal every circle gets the
    midpoint radius.
    """
    if not doc_counts:
        return []
    lo, hi = min(doc_counts), max(doc_counts)
    rmin, rmax = opts.min_radius_px, opts.max_radius_px
    if lo == hi:
        return [(rmin + rmax) / 2.0 for _ in doc_counts]
    a_min, a_max = rmin * rmin, rmax * rmax
    return [math.sqrt(a_min + (n - lo) / (hi - lo) * (a_max - a_min)) for n in doc_counts]


def _axis_range(values: Sequence[float]) -> tuple[float, float]:
    lo, hi = min(values), max(values)
    span = hi - lo
    if span <= 0:
        half = max(abs(lo), 1.0) / 2.0
        return lo - half, hi + half
    return lo - 0.1 * span, hi + 0.1 * span


def _f(x: float) -> str:
    s = f"{x:.2f}"
    return "0.00" if s == "-0.00" else s


def render_map_svg(smap: StrategicMap, opts: RenderOptions = RenderOptions()) -> bytes:
    """Strategic diagram: centrality on x, density on y, one circle per theme."""
    if not smap.themes:
        raise EmptyMap("cannot render a map without themes")
    W, H, M = opts.width_px, opts.height_px, opts.margin_px
    left, right, top, bottom = M, W - M, M, H - M
    cx, cy = smap.origin
    metrics = [m for _, m in smap.themes]
    x_lo, x_hi = _axis_range([m.centrality for m in metrics] + [cx])
    y_lo, y_hi = _axis_range([m.density for m in metrics] + [cy])

    def px(c: float) -> float:
        return left + (c - x_lo) / (x_hi - x_lo) * (right - left)

    def py(d: float) -> float:
        return bottom - (d - y_lo) / (y_hi - y_lo) * (bottom - top)

    dp = opts.decimal_places
    ox, oy = px(cx), py(cy)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" '
        f'viewBox="0 0 {W} {H}" font-family="sans-serif">',
        f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
        f'<rect x="{left}" y="{top}" width="{right - left}" height="{bottom - top}" '
        'fill="none" stroke="#999999"/>',
        f'<line class="axis" x1="{_f(ox)}" y1="{top}" x2="{_f(ox)}" y2="{bottom}" '
        'stroke="#444444" stroke-dasharray="6,4"/>',
        f'<line class="axis" x1="{left}" y1="{_f(oy)}" x2="{right}" y2="{_f(oy)}" '
        'stroke="#444444" stroke-dasharray="6,4"/>',
        f'<text x="{right - 6}" y="{top + 18}" text-anchor="end" font-size="14" fill="#666666">'
        f'{QUADRANT_NAMES["Q1"]}</text>',
        f'<text x="{right - 6}" y="{bottom - 8}" text-anchor="end" font-size="14" fill="#666666">'
        f'{QUADRANT_NAMES["Q2"]}</text>',
        f'<text x="{left + 6}" y="{top + 18}" font-size="14" fill="#666666">{QUADRANT_NAMES["Q3"]}</text>',
        f'<text x="{left + 6}" y="{bottom - 8}" font-size="14" fill="#666666">{QUADRANT_NAMES["Q4"]}</text>',
        f'<text x="{(left + right) / 2:.1f}" y="{H - 20}" text-anchor="middle" font-size="14">'
        "Centrality (degree of relevance)</text>",
        f'<text x="20" y="{(top + bottom) / 2:.1f}" text-anchor="middle" font-size="14" '
        f'transform="rotate(-90 20 {(top + bottom) / 2:.1f})">Density (degree of development)</text>',
    ]

    radii = circle_radii([t.doc_count for t, _ in smap.themes], opts)
    # larger circles first so small ones stay visible on top
    order = sorted(range(len(radii)), key=lambda i: (-radii[i], i))
    for i in order:
        theme, m = smap.themes[i]
        x, y = px(m.centrality), py(m.density)
        tip = (
            f"{theme.label}: centrality {m.centrality:.{dp}f}, density {m.density:.{dp}f}, "
            f"documents {theme.doc_count}, {m.quadrant}"
        )
        out.append(
            f'<circle cx="{_f(x)}" cy="{_f(y)}" r="{_f(radii[i])}" fill="#4f81bd" '
            f'fill-opacity="0.45" stroke="#1f3f66" data-quadrant="{m.quadrant}">'
            f"<title>{escape(tip)}</title></circle>"
        )
        if opts.show_labels:
            out.append(
                f'<text x="{_f(x)}" y="{_f(y + 4)}" text-anchor="middle" font-size="12">'
                f"{escape(theme.label)}</text>"
            )
    out.append("</svg>")
    return ("\n".join(out) + "\n").encode("utf-8")

