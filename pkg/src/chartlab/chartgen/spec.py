"""Chart ground truth: sampling deterministic chart specifications.

A ChartSpec is the single source of truth for rendering and QA; every
question answer is recomputable from it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .palette import PALETTE

CHART_TYPES = ("bar", "line", "dotline")
LINE_STYLES = ("solid", "dotted", "dashed")

# Closed vocabularies. Categories are always a prefix of this ordered pool,
# so a category name implies its x-axis slot; series names and colors are
# sampled per chart, so series identity must be read off the legend.
CATEGORY_POOL = ("Jan", "Feb", "Mar", "Apr", "May", "Jun",
                 "Jul", "Aug", "Sep", "Oct", "Nov", "Dec")
SERIES_POOL = ("Alpha", "Bravo", "Comet", "Delta",
               "Ember", "Flint", "Gale", "Harbor")
TITLE_POOL = ("Revenue Overview", "Export Volume", "Rainfall Totals",
              "Population Growth", "Energy Output", "Sales Figures",
              "Traffic Counts", "Budget Summary", "Yield Report",
              "Demand Forecast", "Quality Scores", "Uptime Record")
X_LABEL = "Month"
Y_LABEL_POOL = ("Value", "Amount", "Score", "Level")


class GeneratorConfigError(ValueError):
    """Invalid generator configuration."""


class ChartSpecError(ValueError):
    """ChartSpec invariant violation."""


@dataclass(frozen=True)
class Series:
    name: str
    color_index: int
    line_style: str  # used by line/dotline charts only
    values: tuple[float, ...]

    def __post_init__(self):
        if not (0 <= self.color_index < len(PALETTE)):
            raise ChartSpecError(f"color index {self.color_index} out of palette range")
        if self.line_style not in LINE_STYLES:
            raise ChartSpecError(f"unknown line style {self.line_style!r}")
        if not all(np.isfinite(v) for v in self.values):
            raise ChartSpecError(f"series {self.name!r} has non-finite values")


@dataclass(frozen=True)
class ChartSpec:
    chart_id: str
    chart_type: str
    title: str
    x_label: str
    y_label: str
    categories: tuple[str, ...]
    series: tuple[Series, ...]
    y_range: tuple[float, float]
    style_seed: int

    def __post_init__(self):
        if self.chart_type not in CHART_TYPES:
            raise ChartSpecError(f"unknown chart type {self.chart_type!r}")
        if not self.series:
            raise ChartSpecError("chart needs at least one series")
        if len(self.categories) < 1:
            raise ChartSpecError("chart needs at least one category")
        lo, hi = self.y_range
        if not lo < hi:
            raise ChartSpecError("empty y-range")
        names = [s.name for s in self.series]
        if len(set(names)) != len(names):
            raise ChartSpecError("series names must be pairwise distinct")
        colors = [s.color_index for s in self.series]
        if len(set(colors)) != len(colors):
            raise ChartSpecError("series colors must be pairwise distinct")
        for s in self.series:
            if len(s.values) != len(self.categories):
                raise ChartSpecError(
                    f"series {s.name!r} has {len(s.values)} values for "
                    f"{len(self.categories)} categories")
            if any(v < lo or v > hi for v in s.values):
                raise ChartSpecError(f"series {s.name!r} leaves the y-range")

    def value(self, series_name: str, category: str) -> float:
        s = next(s for s in self.series if s.name == series_name)
        return s.values[self.categories.index(category)]


@dataclass(frozen=True)
class GeneratorConfig:
    """Ranges and pools that drive chart sampling. All bounds inclusive."""

    chart_types: tuple[str, ...] = CHART_TYPES
    series_count: tuple[int, int] = (1, 3)
    category_count: tuple[int, int] = (3, 6)
    value_range: tuple[float, float] = (5.0, 95.0)
    y_range: tuple[float, float] = (0.0, 100.0)
    resolution: int = 64

    def __post_init__(self):
        if not self.chart_types:
            raise GeneratorConfigError("chart_types is empty")
        for t in self.chart_types:
            if t not in CHART_TYPES:
                raise GeneratorConfigError(f"unknown chart type {t!r}")
        lo, hi = self.series_count
        if not (1 <= lo <= hi <= len(SERIES_POOL)):
            raise GeneratorConfigError(f"series_count range {self.series_count} is empty or too wide")
        lo, hi = self.category_count
        if not (2 <= lo <= hi <= len(CATEGORY_POOL)):
            raise GeneratorConfigError(f"category_count range {self.category_count} is empty or too wide")
        vlo, vhi = self.value_range
        if not vlo < vhi:
            raise GeneratorConfigError("value_range is empty")
        ylo, yhi = self.y_range
        if not (ylo <= vlo and vhi <= yhi):
            raise GeneratorConfigError("value_range must sit inside y_range")


def _rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed & 0x7FFFFFFFFFFFFFFF, stream]))


def sample_chart_spec(seed: int, config: GeneratorConfig) -> ChartSpec:
    """Deterministically sample one chart specification from ``seed``."""
    r = _rng(seed, 0)
    chart_type = config.chart_types[int(r.integers(len(config.chart_types)))]
    n_series = int(r.integers(config.series_count[0], config.series_count[1] + 1))
    n_cats = int(r.integers(config.category_count[0], config.category_count[1] + 1))
    categories = CATEGORY_POOL[:n_cats]
    names = list(r.choice(len(SERIES_POOL), size=n_series, replace=False))
    colors = list(r.choice(len(PALETTE), size=n_series, replace=False))
    vlo, vhi = config.value_range
    series = []
    for i in range(n_series):
        values = tuple(
            round(float(v), 1)
            for v in r.uniform(vlo, vhi, size=n_cats)
        )
        style = LINE_STYLES[int(r.integers(len(LINE_STYLES)))]
        series.append(Series(
            name=SERIES_POOL[names[i]],
            color_index=int(colors[i]),
            line_style=style,
            values=values,
        ))
    title = TITLE_POOL[int(r.integers(len(TITLE_POOL)))]
    y_label = Y_LABEL_POOL[int(r.integers(len(Y_LABEL_POOL)))]
    return ChartSpec(
        chart_id=f"c{seed:06d}",
        chart_type=chart_type,
        title=title,
        x_label=X_LABEL,
        y_label=y_label,
        categories=categories,
        series=tuple(series),
        y_range=config.y_range,
        style_seed=seed,
    )


def spec_to_dict(spec: ChartSpec) -> dict:
    return {
        "chart_id": spec.chart_id,
        "chart_type": spec.chart_type,
        "title": spec.title,
        "x_label": spec.x_label,
        "y_label": spec.y_label,
        "categories": list(spec.categories),
        "series": [
            {
                "name": s.name,
                "color_index": s.color_index,
                "line_style": s.line_style,
                "values": list(s.values),
            }
            for s in spec.series
        ],
        "y_range": list(spec.y_range),
        "style_seed": spec.style_seed,
    }


def spec_from_dict(d: dict) -> ChartSpec:
    return ChartSpec(
        chart_id=d["chart_id"],
        chart_type=d["chart_type"],
        title=d["title"],
        x_label=d["x_label"],
        y_label=d["y_label"],
        categories=tuple(d["categories"]),
        series=tuple(
            Series(
                name=s["name"],
                color_index=s["color_index"],
                line_style=s["line_style"],
                values=tuple(s["values"]),
            )
            for s in d["series"]
        ),
        y_range=tuple(d["y_range"]),
        style_seed=d["style_seed"],
    )
