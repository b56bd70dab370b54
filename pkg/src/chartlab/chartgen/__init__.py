"""Synthetic chart corpus: spec sampling, rasterization, QA, and datasets."""

from .dataset import (
    DatasetBundle,
    DatasetConfig,
    DatasetError,
    build_dataset,
    config_digest,
    load_dataset,
    load_negatives,
)
from .palette import PALETTE, channel_distance
from .qa import QA_KINDS, CaptionRecord, QAError, QARecord, caption_from_qa, generate_qa, positive_caption
from .render import RESOLUTIONS, RenderError, plot_area, render_chart
from .spec import (
    CATEGORY_POOL,
    CHART_TYPES,
    SERIES_POOL,
    TITLE_POOL,
    ChartSpec,
    ChartSpecError,
    GeneratorConfig,
    GeneratorConfigError,
    Series,
    sample_chart_spec,
    spec_from_dict,
    spec_to_dict,
)

__all__ = [
    "CATEGORY_POOL", "CHART_TYPES", "CaptionRecord", "ChartSpec", "ChartSpecError",
    "DatasetBundle", "DatasetConfig", "DatasetError", "GeneratorConfig",
    "GeneratorConfigError", "PALETTE", "QA_KINDS", "QAError", "QARecord",
    "RESOLUTIONS", "RenderError", "SERIES_POOL", "Series", "TITLE_POOL",
    "build_dataset", "caption_from_qa", "channel_distance", "config_digest",
    "generate_qa", "load_dataset", "load_negatives", "plot_area",
    "positive_caption", "render_chart", "sample_chart_spec", "spec_from_dict",
    "spec_to_dict",
]
