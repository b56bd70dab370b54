"""QA pairs computed from chart ground truth, and their assertive captions.

Questions and captions are fixed templates; numbers are canonicalized to
one decimal place (counts stay integers) so exact-match and perturbation
logic never has to guess a format.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .spec import ChartSpec

QA_KINDS = ("value_lookup", "count", "min_series", "max_series",
            "compare_binary", "title")


class QAError(ValueError):
    pass


@dataclass(frozen=True)
class QARecord:
    qa_id: str
    chart_id: str
    kind: str
    question: str
    answer: str
    answer_is_numeric: bool

    def __post_init__(self):
        if self.kind not in QA_KINDS:
            raise QAError(f"unknown qa kind {self.kind!r}")
        if self.kind == "compare_binary" and self.answer not in ("Yes", "No"):
            raise QAError(f"binary answer must be Yes/No, got {self.answer!r}")


@dataclass(frozen=True)
class CaptionRecord:
    caption_id: str
    chart_id: str
    source_qa_id: str
    text: str
    polarity: str  # "positive" | "hard_negative"
    strategy: str  # "none" for positives
    perturbation_magnitude: float | None = None

    def __post_init__(self):
        if self.polarity not in ("positive", "hard_negative"):
            raise QAError(f"bad polarity {self.polarity!r}")


def canonical_value(v: float) -> str:
    return f"{v:.1f}"


def _marks_noun(chart_type: str) -> str:
    return "bars" if chart_type == "bar" else "lines"


def generate_qa(spec: ChartSpec, seed: int, kinds=QA_KINDS) -> list[QARecord]:
    """Emit QA records for every requested kind the spec supports.

    Kinds a chart cannot support (series comparisons on a single-series
    chart, counts below 2) are skipped silently.
    """
    kinds = tuple(kinds)
    if not kinds:
        raise QAError("kinds must be non-empty")
    for k in kinds:
        if k not in QA_KINDS:
            raise QAError(f"unknown qa kind {k!r}")
    r = np.random.default_rng(np.random.SeedSequence([seed & 0x7FFFFFFFFFFFFFFF, 1]))
    records: list[QARecord] = []

    def emit(kind, question, answer, numeric):
        records.append(QARecord(
            qa_id=f"{spec.chart_id}-q{len(records):02d}",
            chart_id=spec.chart_id,
            kind=kind,
            question=question,
            answer=answer,
            answer_is_numeric=numeric,
        ))

    if "title" in kinds:
        emit("title", "What is the title of the chart?", spec.title, False)

    if "count" in kinds:
        n = (len(spec.series) * len(spec.categories)
             if spec.chart_type == "bar" else len(spec.series))
        # a count of 1 admits no perturbation inside the relative band
        if n >= 2:
            emit("count",
                 f"How many {_marks_noun(spec.chart_type)} are shown in the chart?",
                 str(n), True)

    if "value_lookup" in kinds:
        for s in spec.series:
            cat = spec.categories[int(r.integers(len(spec.categories)))]
            emit("value_lookup",
                 f"What is the value of {s.name} in {cat}?",
                 canonical_value(spec.value(s.name, cat)), True)

    if len(spec.series) >= 2:
        for kind, pick in (("min_series", np.argmin), ("max_series", np.argmax)):
            if kind not in kinds:
                continue
            order = r.permutation(len(spec.categories))
            for ci in order:
                cat = spec.categories[int(ci)]
                col = [s.values[int(ci)] for s in spec.series]
                best = int(pick(col))
                if col.count(col[best]) == 1:
                    word = "lowest" if kind == "min_series" else "highest"
                    emit(kind,
                         f"Which series has the {word} value in {cat}?",
                         spec.series[best].name, False)
                    break

        if "compare_binary" in kinds:
            a, b = (int(i) for i in r.choice(len(spec.series), size=2, replace=False))
            order = r.permutation(len(spec.categories))
            for ci in order:
                cat = spec.categories[int(ci)]
                va = spec.series[a].values[int(ci)]
                vb = spec.series[b].values[int(ci)]
                if va != vb:
                    emit("compare_binary",
                         f"Is {spec.series[a].name} greater than {spec.series[b].name} in {cat}?",
                         "Yes" if va > vb else "No", False)
                    break

    return records


_VALUE_Q = re.compile(r"^What is the value of (.+) in (.+)\?$")
_COUNT_Q = re.compile(r"^How many (bars|lines) are shown in the chart\?$")
_MINMAX_Q = re.compile(r"^Which series has the (lowest|highest) value in (.+)\?$")
_COMPARE_Q = re.compile(r"^Is (.+) greater than (.+) in (.+)\?$")


def caption_from_qa(qa: QARecord, answer: str | None = None) -> str:
    """Assertive caption for a QA pair.

    ``answer`` overrides the record's answer; negative synthesis uses it
    to embed a perturbed answer in the otherwise unchanged template.
    """
    ans = qa.answer if answer is None else answer
    if qa.kind == "title":
        return f"The title of the chart is {ans}."
    if qa.kind == "value_lookup":
        m = _VALUE_Q.match(qa.question)
        if not m:
            raise QAError(f"unparseable value question {qa.question!r}")
        return f"The value of {m.group(1)} in {m.group(2)} was {ans}."
    if qa.kind == "count":
        m = _COUNT_Q.match(qa.question)
        if not m:
            raise QAError(f"unparseable count question {qa.question!r}")
        return f"The number of {m.group(1)} in the chart is {ans}."
    if qa.kind in ("min_series", "max_series"):
        m = _MINMAX_Q.match(qa.question)
        if not m:
            raise QAError(f"unparseable series question {qa.question!r}")
        return f"{ans} had the {m.group(1)} value in {m.group(2)}."
    if qa.kind == "compare_binary":
        m = _COMPARE_Q.match(qa.question)
        if not m:
            raise QAError(f"unparseable comparison {qa.question!r}")
        if ans not in ("Yes", "No"):
            raise QAError(f"binary caption needs Yes/No, got {ans!r}")
        link = "is" if ans == "Yes" else "is not"
        return f"{m.group(1)} {link} greater than {m.group(2)} in {m.group(3)}."
    raise QAError(f"unknown qa kind {qa.kind!r}")


def positive_caption(qa: QARecord, index: int = 0) -> CaptionRecord:
    return CaptionRecord(
        caption_id=f"{qa.qa_id}-p{index}",
        chart_id=qa.chart_id,
        source_qa_id=qa.qa_id,
        text=caption_from_qa(qa),
        polarity="positive",
        strategy="none",
    )
