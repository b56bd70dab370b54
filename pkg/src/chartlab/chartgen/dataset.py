"""Dataset builder: charts on disk as PNGs plus line-delimited JSON records.

Every chart is a pure function of (base_seed + index, generator config),
so rebuilding with the same config reproduces every byte. The manifest
carries a SHA-256 digest of the resolved config; equal digests therefore
imply byte-equal datasets.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

from .qa import QA_KINDS, CaptionRecord, QARecord, generate_qa, positive_caption
from .render import render_chart
from .spec import ChartSpec, GeneratorConfig, sample_chart_spec, spec_from_dict, spec_to_dict

FORMAT_VERSION = 1


class DatasetError(RuntimeError):
    pass


@dataclass(frozen=True)
class DatasetConfig:
    split: str = "train"
    n_charts: int = 100
    base_seed: int = 1000
    generator: GeneratorConfig = field(default_factory=GeneratorConfig)
    qa_kinds: tuple[str, ...] = QA_KINDS

    def __post_init__(self):
        if self.split not in ("train", "eval"):
            raise DatasetError(f"split must be train or eval, got {self.split!r}")
        if self.n_charts < 1:
            raise DatasetError("n_charts must be positive")

    def to_dict(self) -> dict:
        return {
            "split": self.split,
            "n_charts": self.n_charts,
            "base_seed": self.base_seed,
            "generator": {
                "chart_types": list(self.generator.chart_types),
                "series_count": list(self.generator.series_count),
                "category_count": list(self.generator.category_count),
                "value_range": list(self.generator.value_range),
                "y_range": list(self.generator.y_range),
                "resolution": self.generator.resolution,
            },
            "qa_kinds": list(self.qa_kinds),
        }


def config_digest(config: DatasetConfig) -> str:
    blob = json.dumps(config.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _write(path: Path, text: str):
    try:
        path.write_text(text)
    except OSError as e:
        raise DatasetError(f"cannot write {path}: {e}") from e


def build_dataset(config: DatasetConfig, out_dir: str | Path) -> dict:
    """Generate, render, and persist a dataset; returns the manifest."""
    root = Path(out_dir)
    (root / "images").mkdir(parents=True, exist_ok=True)
    (root / "specs").mkdir(parents=True, exist_ok=True)

    entries = []
    qa_lines = []
    caption_lines = []
    for i in range(config.n_charts):
        seed = config.base_seed + i
        spec = sample_chart_spec(seed, config.generator)
        raster = render_chart(spec, config.generator.resolution)
        image_rel = f"images/{spec.chart_id}.png"
        try:
            Image.fromarray(raster, "RGB").save(root / image_rel, format="PNG")
        except OSError as e:
            raise DatasetError(f"cannot write {root / image_rel}: {e}") from e
        spec_rel = f"specs/{spec.chart_id}.json"
        _write(root / spec_rel, _dump(spec_to_dict(spec)) + "\n")

        qas = generate_qa(spec, seed, config.qa_kinds)
        captions = [positive_caption(qa) for qa in qas]
        qa_lines.extend(_dump(vars(qa)) for qa in qas)
        caption_lines.extend(_dump(vars(c)) for c in captions)
        entries.append({
            "chart_id": spec.chart_id,
            "image_path": image_rel,
            "spec_path": spec_rel,
            "qa_ids": [qa.qa_id for qa in qas],
            "caption_ids": [c.caption_id for c in captions],
        })

    _write(root / "qa.jsonl", "\n".join(qa_lines) + "\n")
    _write(root / "captions.jsonl", "\n".join(caption_lines) + "\n")
    manifest = {
        "format_version": FORMAT_VERSION,
        "split": config.split,
        "generator_config": config.to_dict(),
        "generator_config_digest": config_digest(config),
        "qa_path": "qa.jsonl",
        "captions_path": "captions.jsonl",
        "entries": entries,
    }
    _write(root / "manifest.json", json.dumps(manifest, sort_keys=True, indent=1) + "\n")
    return manifest


@dataclass
class DatasetBundle:
    """In-memory view of a dataset directory."""

    root: Path
    manifest: dict
    specs: dict[str, ChartSpec]
    qa: dict[str, QARecord]
    captions: dict[str, CaptionRecord]

    def load_image(self, chart_id: str) -> np.ndarray:
        entry = next(e for e in self.manifest["entries"] if e["chart_id"] == chart_id)
        with Image.open(self.root / entry["image_path"]) as im:
            return np.asarray(im.convert("RGB"))


def _read_jsonl(path: Path) -> list[dict]:
    try:
        text = path.read_text()
    except OSError as e:
        raise DatasetError(f"cannot read {path}: {e}") from e
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def load_dataset(root: str | Path) -> DatasetBundle:
    root = Path(root)
    manifest_path = root / "manifest.json"
    try:
        manifest = json.loads(manifest_path.read_text())
    except OSError as e:
        raise DatasetError(f"cannot read {manifest_path}: {e}") from e
    specs = {}
    for entry in manifest["entries"]:
        spec = spec_from_dict(json.loads((root / entry["spec_path"]).read_text()))
        specs[entry["chart_id"]] = spec
    qa = {d["qa_id"]: QARecord(**d) for d in _read_jsonl(root / manifest["qa_path"])}
    captions = {d["caption_id"]: CaptionRecord(**d)
                for d in _read_jsonl(root / manifest["captions_path"])}
    return DatasetBundle(root=root, manifest=manifest, specs=specs, qa=qa, captions=captions)


def load_negatives(root: str | Path) -> dict[str, list[CaptionRecord]]:
    """Hard negatives grouped by source qa_id; empty dict if none built yet."""
    path = Path(root) / "negatives.jsonl"
    if not path.exists():
        return {}
    grouped: dict[str, list[CaptionRecord]] = {}
    for d in _read_jsonl(path):
        rec = CaptionRecord(**d)
        grouped.setdefault(rec.source_qa_id, []).append(rec)
    return grouped
