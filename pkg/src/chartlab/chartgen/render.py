"""Software rasterizer for chart specs.

Pure numpy, built-in bitmap font, no system font stack: the same spec
always produces byte-identical pixels on any platform. Layout constants
scale with resolution so the three supported sizes share one geometry.
"""

from __future__ import annotations

import numpy as np

from .font import ADVANCE, draw_text, text_width
from .palette import BACKGROUND, INK, PALETTE
from .spec import ChartSpec

RESOLUTIONS = (64, 128, 224)

MARKER = 3  # dotline marker half-extent multiplier, in font-scale units


class RenderError(ValueError):
    """Spec does not fit the requested raster layout."""


def _layout(resolution: int):
    if resolution not in RESOLUTIONS:
        raise RenderError(f"unsupported resolution {resolution}, want one of {RESOLUTIONS}")
    s = resolution // 64
    w = h = resolution
    left = 22 * s
    right = w - 2 * s
    top = 18 * s
    axis_y = h - 13 * s
    return s, w, h, left, right, top, axis_y


def plot_area(resolution: int) -> tuple[int, int, int, int]:
    """Data-mark region as (x0, y0, x1, y1), half-open, excluding axes."""
    s, w, h, left, right, top, axis_y = _layout(resolution)
    return left, top, right, axis_y


def _fill(canvas, x0, y0, x1, y1, color):
    h, w, _ = canvas.shape
    x0, y0 = max(x0, 0), max(y0, 0)
    x1, y1 = min(x1, w), min(y1, h)
    if x0 < x1 and y0 < y1:
        canvas[y0:y1, x0:x1] = color


def _bresenham(x0, y0, x1, y1):
    dx = abs(x1 - x0)
    dy = -abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx + dy
    while True:
        yield x0, y0
        if x0 == x1 and y0 == y1:
            return
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            x0 += sx
        if e2 <= dx:
            err += dx
            y0 += sy


def _pattern_on(style: str, idx: int, s: int) -> bool:
    if style == "solid":
        return True
    if style == "dotted":
        return idx % (2 * s) < s
    if style == "dashed":
        return idx % (5 * s) < 3 * s
    raise RenderError(f"unknown line style {style!r}")


def _slot_edges(left: int, right: int, n: int) -> list[int]:
    plot_w = right - left
    return [left + round(i * plot_w / n) for i in range(n + 1)]


def render_chart(spec: ChartSpec, resolution: int = 64) -> np.ndarray:
    """Rasterize ``spec`` to an (H, W, 3) uint8 array."""
    s, w, h, left, right, top, axis_y = _layout(resolution)
    canvas = np.empty((h, w, 3), dtype=np.uint8)
    canvas[:] = BACKGROUND

    # title band
    max_title = (w - 4 * s) // (ADVANCE * s)
    draw_text(canvas, 2 * s, s, spec.title[:max_title], INK, s)

    # legend band: swatch plus two-letter series tag per entry
    entry_w = 4 * s + 2 * s + text_width("XX", s) + 3 * s
    if 2 * s + len(spec.series) * entry_w - 3 * s > w - 2 * s:
        raise RenderError(f"{len(spec.series)} legend entries do not fit at {resolution}px")
    lx = 2 * s
    for series in spec.series:
        _fill(canvas, lx, 10 * s, lx + 4 * s, 14 * s, PALETTE[series.color_index])
        draw_text(canvas, lx + 6 * s, 9 * s, series.name[:2], INK, s)
        lx += entry_w

    # axes and ticks
    _fill(canvas, left - s, top, left, axis_y + s, INK)
    _fill(canvas, left - s, axis_y, right, axis_y + s, INK)
    for ty in (top, axis_y):
        _fill(canvas, left - 3 * s, ty, left - s, ty + s, INK)

    lo, hi = spec.y_range
    plot_h = axis_y - top
    for value, ty in ((hi, top), (lo, axis_y - 6 * s)):
        label = f"{value:g}"
        draw_text(canvas, left - 3 * s - text_width(label, s) - s, ty, label, INK, s)

    n_cats = len(spec.categories)
    edges = _slot_edges(left, right, n_cats)
    centers = [(edges[i] + edges[i + 1]) // 2 for i in range(n_cats)]
    for i, cat in enumerate(spec.categories):
        _fill(canvas, centers[i], axis_y + s, centers[i] + s, axis_y + 3 * s, INK)
        slot_w = edges[i + 1] - edges[i]
        max_chars = slot_w // (ADVANCE * s)
        if max_chars >= 1:
            label = cat[:max_chars]
            draw_text(canvas, centers[i] - text_width(label, s) // 2,
                      axis_y + 3 * s + s, label, INK, s)

    def height_px(value: float) -> int:
        frac = (value - lo) / (hi - lo)
        return round(frac * plot_h)

    if spec.chart_type == "bar":
        n_series = len(spec.series)
        for i in range(n_cats):
            slot_w = edges[i + 1] - edges[i]
            bar_w = (slot_w - 2 * s) // n_series
            if bar_w < 1:
                raise RenderError(
                    f"{n_series} bars do not fit a {slot_w}px slot at {resolution}px")
            bx = edges[i] + s
            for series in spec.series:
                hp = height_px(series.values[i])
                _fill(canvas, bx, axis_y - hp, bx + bar_w, axis_y,
                      PALETTE[series.color_index])
                bx += bar_w
    else:
        for series in spec.series:
            color = PALETTE[series.color_index]
            pts = [(centers[i], axis_y - max(height_px(series.values[i]), 1))
                   for i in range(n_cats)]
            idx = 0
            for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
                for px, py in _bresenham(x0, y0, x1, y1):
                    if _pattern_on(series.line_style, idx, s):
                        _fill(canvas, px, py, px + s, py + s, color)
                    idx += 1
                idx -= 1  # segment endpoints are shared
            if spec.chart_type == "dotline":
                r = (MARKER * s) // 2
                for px, py in pts:
                    _fill(canvas, px - r, py - r, px - r + MARKER * s, py - r + MARKER * s, color)

    return canvas
