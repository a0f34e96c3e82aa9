"""Post-fit analytics: topic attribution, shares, trends, word exports."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import Corpus
from .errors import AlignmentMismatch, MissingYear, UnknownTopicId
from .lda import LdaModel
from .trends import PER_TOPIC, PER_YEAR, TrendTable, build_trend_table

__all__ = [
    "TopicSummary",
    "dominant_topic",
    "topic_shares",
    "yearly_topic_percentages",
    "top_words",
    "label_topics",
    "load_labels",
    "wordcloud_weights",
    "save_topics_json",
    "save_shares_csv",
    "save_trends_csv",
    "save_wordcloud_csv",
]


@dataclass
class TopicSummary:
    topic_id: int
    label: str
    top_words: list[tuple[str, float]]


def dominant_topic(theta_row) -> int:
    """Argmax topic of one document's topic-share row; ties pick the
    lowest index."""
    return int(np.argmax(np.asarray(theta_row)))


def _check_alignment(model: LdaModel, corpus: Corpus) -> None:
    record_ids = [record.id for record in corpus.records]
    if len(record_ids) != len(model.doc_ids):
        raise AlignmentMismatch(
            f"corpus has {len(record_ids)} records, model has {len(model.doc_ids)} documents"
        )
    for position, (record_id, doc_id) in enumerate(zip(record_ids, model.doc_ids)):
        if record_id != doc_id:
            raise AlignmentMismatch(
                f"position {position}: corpus record {record_id!r} vs model document {doc_id!r}"
            )


def _topic_labels(n_topics: int, labels: dict[int, str] | None) -> list[str]:
    labels = labels or {}
    return [labels.get(topic, f"topic-{topic}") for topic in range(n_topics)]


def topic_shares(
    model: LdaModel, corpus: Corpus, labels: dict[int, str] | None = None
) -> TrendTable:
    """Fraction of documents attributed to each topic, single 'all' column."""
    _check_alignment(model, corpus)
    n_topics = model.doc_topic.shape[1]
    counts = [[0] for _ in range(n_topics)]
    for row in model.doc_topic:
        counts[dominant_topic(row)][0] += 1
    return build_trend_table(
        _topic_labels(n_topics, labels), ["all"], counts, normalization=PER_YEAR
    )


def yearly_topic_percentages(
    model: LdaModel,
    corpus: Corpus,
    normalization: str = PER_TOPIC,
    labels: dict[int, str] | None = None,
) -> TrendTable:
    """Dominant-topic counts per (topic, Gregorian year).

    per_topic spreads each topic's documents across years (row sums
    100); per_year gives each year's topic mix (column sums 100).
    """
    if normalization not in (PER_TOPIC, PER_YEAR):
        raise ValueError(f"unknown normalization {normalization!r}")
    _check_alignment(model, corpus)
    for record in corpus.records:
        if record.date is None:
            raise MissingYear(record.id)
    n_topics = model.doc_topic.shape[1]
    years = sorted({record.date.gregorian_year for record in corpus.records})
    year_index = {year: j for j, year in enumerate(years)}
    counts = [[0] * len(years) for _ in range(n_topics)]
    for record, theta_row in zip(corpus.records, model.doc_topic):
        counts[dominant_topic(theta_row)][year_index[record.date.gregorian_year]] += 1
    return build_trend_table(
        _topic_labels(n_topics, labels), years, counts, normalization=normalization
    )


def _term_names(model: LdaModel) -> list[str]:
    n_terms = model.topic_word.shape[1]
    if model.vocab is not None:
        return model.vocab.terms
    width = len(str(max(n_terms - 1, 0)))
    return [f"term-{term:0{width}d}" for term in range(n_terms)]


def top_words(model: LdaModel, topic_id: int, n: int) -> list[tuple[str, float]]:
    """The n most probable terms of a topic, ties broken lexicographically."""
    n_topics, n_terms = model.topic_word.shape
    if not 0 <= topic_id < n_topics:
        raise UnknownTopicId(topic_id)
    if not 1 <= n <= n_terms:
        raise ValueError(f"n must be in [1, {n_terms}], got {n}")
    names = _term_names(model)
    row = model.topic_word[topic_id]
    ranked = sorted(zip(names, row), key=lambda pair: (-pair[1], pair[0]))
    return [(term, float(probability)) for term, probability in ranked[:n]]


def load_labels(path) -> dict[int, str]:
    """Sidecar JSON object mapping topic id (as a string key) to label."""
    with Path(path).open(encoding="utf-8") as handle:
        payload = json.load(handle)
    return {int(key): str(value) for key, value in payload.items()}


def label_topics(
    model: LdaModel, label_map: dict[int, str] | None = None, top_m: int = 10
) -> list[TopicSummary]:
    """Attach human-assigned labels; unlabeled topics get "topic-k"."""
    n_topics, n_terms = model.topic_word.shape
    label_map = label_map or {}
    for topic_id in label_map:
        if not 0 <= topic_id < n_topics:
            raise UnknownTopicId(topic_id)
    top_m = min(top_m, n_terms)
    return [
        TopicSummary(
            topic_id=topic,
            label=label_map.get(topic, f"topic-{topic}"),
            top_words=top_words(model, topic, top_m),
        )
        for topic in range(n_topics)
    ]


def wordcloud_weights(model: LdaModel, topic_id: int, n: int) -> list[tuple[str, float]]:
    """top_words rescaled so the heaviest term weighs exactly 1.0."""
    pairs = top_words(model, topic_id, n)
    peak = pairs[0][1]
    return [(term, probability / peak) for term, probability in pairs]


# --- deterministic file exports ---------------------------------------------

def save_topics_json(summaries: list[TopicSummary], path) -> None:
    payload = [
        {
            "topic_id": summary.topic_id,
            "label": summary.label,
            "top_words": [[term, probability] for term, probability in summary.top_words],
        }
        for summary in summaries
    ]
    with Path(path).open("w", encoding="utf-8") as handle:
        json.dump(payload, handle, ensure_ascii=False, indent=2)
        handle.write("\n")


def save_shares_csv(table: TrendTable, path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["topic", "count", "percent"])
        for row_label, counts, percents in zip(table.axis_rows, table.counts, table.percentages):
            writer.writerow([row_label, counts[0], repr(percents[0])])


def save_trends_csv(table: TrendTable, path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["topic", "year", "count", "percent", "normalization"])
        for i, row_label in enumerate(table.axis_rows):
            for j, year in enumerate(table.axis_cols):
                writer.writerow(
                    [row_label, year, table.counts[i][j], repr(table.percentages[i][j]), table.normalization]
                )


def save_wordcloud_csv(pairs: list[tuple[str, float]], path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["term", "weight"])
        for term, weight in pairs:
            writer.writerow([term, repr(weight)])
