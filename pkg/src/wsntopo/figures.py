"""Render metric series and distribution tables as standalone SVG files.

No plotting library: each figure is a single hand-assembled SVG string
with axes, ticks, and one data layer (line, step, or scatter).  Output
is deterministic for identical input.
"""

from __future__ import annotations

from .analyze import AnalysisResult, MetricSeries, Table

WIDTH = 640.0
HEIGHT = 420.0
MARGIN_L = 72.0
MARGIN_R = 24.0
MARGIN_T = 40.0
MARGIN_B = 52.0

STROKE = "#1f6fb2"
AXIS = "#333333"

# figure name -> (metric column, y-axis label)
LINE_FIGURES: dict[str, tuple[str, str]] = {
    "fig1a": ("isolate_fraction", "isolate fraction"),
    "fig1b": ("d_plus", "density (sink-connected)"),
    "fig1c": ("max_out_degree_all", "max out-degree"),
    "fig2b": ("rho", "degree assortativity"),
    "fig3a": ("sink_radius", "sink-radius"),
    "fig3b": ("avg_sink_distance", "avg sink-distance"),
    "fig4a": ("max_sink_betweenness", "max sink-betweenness"),
    "diameter": ("diameter", "diameter"),
}

# figure name -> (distribution kind, style, x label, y label)
DIST_FIGURES: dict[str, tuple[str, str, str, str]] = {
    "fig2a": ("degree_dist", "step", "degree", "nodes"),
    "fig2c": ("knn_k", "scatter", "degree", "avg neighbor degree"),
    "fig3c": ("sink_distance_dist", "step", "sink-distance (hops)", "sensors"),
    "fig4b": ("sb_k", "scatter", "degree", "avg sink-betweenness"),
    "fig4c": ("sbnn_sb", "scatter", "sink-betweenness", "avg neighbor sink-betweenness"),
}

FIGURE_NAMES = tuple(LINE_FIGURES) + tuple(DIST_FIGURES)


class UnknownFigureError(ValueError):
    def __init__(self, names):
        valid = ", ".join(FIGURE_NAMES)
        super().__init__(
            f"unknown figure name(s): {', '.join(sorted(names))}; valid names: {valid}"
        )


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _label(v: float) -> str:
    return f"{v:.6g}"


def _esc(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    )


def _span(values, anchor_zero: bool = False) -> tuple[float, float]:
    lo, hi = min(values), max(values)
    if anchor_zero:
        lo = min(lo, 0.0)
    if hi == lo:
        pad = abs(hi) * 0.1 or 0.5
    else:
        pad = (hi - lo) * 0.05
    return lo - pad, hi + pad


class _Frame:
    """Maps data coordinates to pixels and draws the axes."""

    def __init__(self, xspan: tuple[float, float], yspan: tuple[float, float]):
        self.x0, self.x1 = xspan
        self.y0, self.y1 = yspan

    def px(self, x: float) -> float:
        inner = WIDTH - MARGIN_L - MARGIN_R
        return MARGIN_L + (x - self.x0) / (self.x1 - self.x0) * inner

    def py(self, y: float) -> float:
        inner = HEIGHT - MARGIN_T - MARGIN_B
        return HEIGHT - MARGIN_B - (y - self.y0) / (self.y1 - self.y0) * inner

    def axes(self, title: str, xlabel: str, ylabel: str) -> list[str]:
        left, right = MARGIN_L, WIDTH - MARGIN_R
        top, bottom = MARGIN_T, HEIGHT - MARGIN_B
        parts = [
            f'<rect x="0" y="0" width="{WIDTH:g}" height="{HEIGHT:g}" fill="white"/>',
            f'<text x="{WIDTH / 2:g}" y="24" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{_esc(title)}</text>',
            f'<line x1="{left:g}" y1="{bottom:g}" x2="{right:g}" y2="{bottom:g}" '
            f'stroke="{AXIS}" stroke-width="1"/>',
            f'<line x1="{left:g}" y1="{top:g}" x2="{left:g}" y2="{bottom:g}" '
            f'stroke="{AXIS}" stroke-width="1"/>',
            f'<text x="{(left + right) / 2:g}" y="{HEIGHT - 12:g}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12">{_esc(xlabel)}</text>',
            f'<text x="16" y="{(top + bottom) / 2:g}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12" '
            f'transform="rotate(-90 16 {(top + bottom) / 2:g})">{_esc(ylabel)}</text>',
        ]
        for i in range(5):
            xv = self.x0 + (self.x1 - self.x0) * i / 4
            yv = self.y0 + (self.y1 - self.y0) * i / 4
            xp, yp = self.px(xv), self.py(yv)
            parts.append(
                f'<line x1="{_fmt(xp)}" y1="{bottom:g}" x2="{_fmt(xp)}" '
                f'y2="{bottom + 4:g}" stroke="{AXIS}" stroke-width="1"/>'
            )
            parts.append(
                f'<text x="{_fmt(xp)}" y="{bottom + 18:g}" text-anchor="middle" '
                f'font-family="sans-serif" font-size="11">{_label(xv)}</text>'
            )
            parts.append(
                f'<line x1="{left - 4:g}" y1="{_fmt(yp)}" x2="{left:g}" '
                f'y2="{_fmt(yp)}" stroke="{AXIS}" stroke-width="1"/>'
            )
            parts.append(
                f'<text x="{left - 8:g}" y="{_fmt(yp + 4)}" text-anchor="end" '
                f'font-family="sans-serif" font-size="11">{_label(yv)}</text>'
            )
        return parts


def _document(body: list[str]) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:g}" '
        f'height="{HEIGHT:g}" viewBox="0 0 {WIDTH:g} {HEIGHT:g}">'
    )
    return "\n".join([head, *body, "</svg>"]) + "\n"


def _empty_figure(title: str) -> str:
    body = [
        f'<rect x="0" y="0" width="{WIDTH:g}" height="{HEIGHT:g}" fill="white"/>',
        f'<text x="{WIDTH / 2:g}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{_esc(title)}</text>',
        f'<text x="{WIDTH / 2:g}" y="{HEIGHT / 2:g}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13" fill="#777777">no data</text>',
    ]
    return _document(body)


def render_line(series: MetricSeries, title: str, ylabel: str) -> str:
    """Time series polyline; None values split the line into segments."""
    defined = [(t, v) for t, v in series.points if v is not None]
    if not defined:
        return _empty_figure(title)
    frame = _Frame(
        _span([t for t, _ in series.points]),
        _span([v for _, v in defined]),
    )
    body = frame.axes(title, "round", ylabel)
    segment: list[str] = []
    segments: list[list[str]] = []
    for t, v in series.points:
        if v is None:
            if segment:
                segments.append(segment)
                segment = []
            continue
        segment.append(f"{_fmt(frame.px(t))},{_fmt(frame.py(v))}")
    if segment:
        segments.append(segment)
    for seg in segments:
        if len(seg) == 1:
            x, y = seg[0].split(",")
            body.append(
                f'<circle cx="{x}" cy="{y}" r="2.5" fill="{STROKE}"/>'
            )
        else:
            body.append(
                f'<polyline fill="none" stroke="{STROKE}" stroke-width="1.5" '
                f'points="{" ".join(seg)}"/>'
            )
    return _document(body)


def _table_xy(table: Table) -> list[tuple[float, float]]:
    return [(float(row[0]), float(row[1])) for row in table.rows]


def render_step(table: Table, title: str, xlabel: str, ylabel: str) -> str:
    """Histogram staircase; each x owns the unit-wide bin [x, x+1)."""
    pts = _table_xy(table)
    if not pts:
        return _empty_figure(title)
    frame = _Frame(
        _span([x for x, _ in pts] + [pts[-1][0] + 1.0]),
        _span([y for _, y in pts], anchor_zero=True),
    )
    body = frame.axes(title, xlabel, ylabel)
    coords = []
    for x, y in pts:
        yp = _fmt(frame.py(y))
        coords.append(f"{_fmt(frame.px(x))},{yp}")
        coords.append(f"{_fmt(frame.px(x + 1.0))},{yp}")
    body.append(
        f'<polyline fill="none" stroke="{STROKE}" stroke-width="1.5" '
        f'points="{" ".join(coords)}"/>'
    )
    return _document(body)


def render_scatter(table: Table, title: str, xlabel: str, ylabel: str) -> str:
    pts = _table_xy(table)
    if not pts:
        return _empty_figure(title)
    frame = _Frame(_span([x for x, _ in pts]), _span([y for _, y in pts]))
    body = frame.axes(title, xlabel, ylabel)
    for x, y in pts:
        body.append(
            f'<circle cx="{_fmt(frame.px(x))}" cy="{_fmt(frame.py(y))}" '
            f'r="3" fill="{STROKE}" fill-opacity="0.8"/>'
        )
    return _document(body)


def render_figure(
    name: str,
    result: AnalysisResult | None = None,
    tables: dict[int, dict[str, Table]] | None = None,
) -> dict[str, str]:
    """Render one named figure.

    Line figures need ``result``; distribution figures need ``tables``
    (timestamp -> kind -> table) and yield one SVG per timestamp, keyed
    ``<name>_t<T>``.  Returns {output name: svg text}.
    """
    if name in LINE_FIGURES:
        column, ylabel = LINE_FIGURES[name]
        if result is None or column not in result.columns:
            return {name: _empty_figure(f"{name}: {column}")}
        series = result.series(column)
        return {name: render_line(series, f"{name}: {column}", ylabel)}
    if name in DIST_FIGURES:
        kind, style, xlabel, ylabel = DIST_FIGURES[name]
        out = {}
        for t, by_kind in (tables or {}).items():
            table = by_kind[kind]
            title = f"{name}: {kind} at t={t}"
            if style == "step":
                svg = render_step(table, title, xlabel, ylabel)
            else:
                svg = render_scatter(table, title, xlabel, ylabel)
            out[f"{name}_t{t}"] = svg
        return out
    raise UnknownFigureError([name])
