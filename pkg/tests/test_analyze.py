"""Dominant-topic shares, yearly trend tables, labels, and exports."""

import json

import numpy as np
import pytest

from conftest import make_record
from lextopic.analyze import (
    dominant_topic,
    label_topics,
    load_labels,
    save_shares_csv,
    save_topics_json,
    save_trends_csv,
    save_wordcloud_csv,
    top_words,
    topic_shares,
    wordcloud_weights,
    yearly_topic_percentages,
)
from lextopic.corpus import Corpus
from lextopic.errors import AlignmentMismatch, MissingYear, UnknownTopicId
from lextopic.lda import LdaConfig, LdaModel, fit, load_model, save_model
from lextopic.trends import PER_TOPIC, PER_YEAR
from lextopic.vectorize import DocTermMatrix, Vocabulary


def _model(doc_topic, topic_word=None, vocab=None):
    doc_topic = np.asarray(doc_topic, dtype=np.float64)
    n_topics = doc_topic.shape[1]
    if topic_word is None:
        n_terms = 3 if vocab is None else len(vocab.terms)
        topic_word = np.full((n_topics, n_terms), 1.0 / n_terms)
    config = LdaConfig(n_topics=n_topics, alpha=1.0, beta=1.0, sweeps=2, burn_in=1)
    return LdaModel(
        config=config,
        doc_topic=doc_topic,
        topic_word=np.asarray(topic_word, dtype=np.float64),
        doc_ids=[f"d{i}" for i in range(doc_topic.shape[0])],
        log_likelihood=[],
        vocab=vocab,
    )


def _corpus_for(model, years=None):
    years = years or [2021] * len(model.doc_ids)
    records = [
        make_record(doc_id, year=year) for doc_id, year in zip(model.doc_ids, years)
    ]
    return Corpus(records)


class TestDominantTopic:
    def test_plain_argmax(self):
        assert dominant_topic([0.2, 0.5, 0.3]) == 1

    def test_tie_picks_lowest_index(self):
        assert dominant_topic([0.4, 0.4, 0.2]) == 0

    def test_single_topic(self):
        assert dominant_topic([1.0]) == 0

    def test_scale_invariant(self):
        row = [0.1, 0.7, 0.2]
        assert dominant_topic(row) == dominant_topic([3 * x for x in row])


class TestTopicShares:
    def test_counts_and_percentages(self):
        model = _model([[0.9, 0.1], [0.2, 0.8], [0.6, 0.4], [0.1, 0.9]])
        table = topic_shares(model, _corpus_for(model))
        assert table.axis_rows == ["topic-0", "topic-1"]
        assert table.axis_cols == ["all"]
        assert table.counts == [[2], [2]]
        assert table.percent("topic-0", "all") == pytest.approx(50.0)
        assert table.total() == 4

    def test_labels_rename_rows(self):
        model = _model([[0.9, 0.1], [0.2, 0.8]])
        table = topic_shares(model, _corpus_for(model), labels={0: "Economic"})
        assert table.axis_rows == ["Economic", "topic-1"]

    def test_concentrated_corpus_is_all_one_topic(self):
        model = _model([[0.8, 0.2], [0.7, 0.3], [0.9, 0.1]])
        table = topic_shares(model, _corpus_for(model))
        assert table.percent("topic-0", "all") == pytest.approx(100.0)
        assert table.percent("topic-1", "all") == pytest.approx(0.0)

    def test_misaligned_corpus_rejected(self):
        model = _model([[0.9, 0.1], [0.2, 0.8]])
        short = Corpus([make_record("d0")])
        with pytest.raises(AlignmentMismatch):
            topic_shares(model, short)
        swapped = Corpus([make_record("d1"), make_record("d0")])
        with pytest.raises(AlignmentMismatch):
            topic_shares(model, swapped)


class TestYearlyTrends:
    def _fixture(self, normalization):
        model = _model([[0.9, 0.1], [0.2, 0.8], [0.7, 0.3], [0.6, 0.4]])
        corpus = _corpus_for(model, years=[2020, 2020, 2021, 2021])
        return yearly_topic_percentages(model, corpus, normalization=normalization)

    def test_counts(self):
        table = self._fixture(PER_TOPIC)
        assert table.axis_cols == [2020, 2021]
        assert table.cell("topic-0", 2020) == 1
        assert table.cell("topic-0", 2021) == 2
        assert table.cell("topic-1", 2020) == 1
        assert table.cell("topic-1", 2021) == 0

    def test_per_topic_rows_sum_to_100(self):
        table = self._fixture(PER_TOPIC)
        assert table.percent("topic-0", 2021) == pytest.approx(200 / 3)
        for i, _row_label in enumerate(table.axis_rows):
            assert sum(table.percentages[i]) == pytest.approx(100.0, abs=1e-9)

    def test_per_year_columns_sum_to_100(self):
        table = self._fixture(PER_YEAR)
        assert table.percent("topic-0", 2020) == pytest.approx(50.0)
        assert table.percent("topic-0", 2021) == pytest.approx(100.0)
        for j, _year in enumerate(table.axis_cols):
            total = sum(table.percentages[i][j] for i in range(len(table.axis_rows)))
            assert total == pytest.approx(100.0, abs=1e-9)

    def test_topic_with_no_documents_keeps_zero_row(self):
        model = _model([[0.9, 0.1, 0.0], [0.8, 0.1, 0.1]])
        corpus = _corpus_for(model, years=[2020, 2021])
        table = yearly_topic_percentages(model, corpus, normalization=PER_TOPIC)
        assert table.axis_rows == ["topic-0", "topic-1", "topic-2"]
        assert table.counts[1] == [0, 0]
        assert table.percentages[1] == [0.0, 0.0]

    def test_single_year_is_100_percent(self):
        model = _model([[0.9, 0.1], [0.2, 0.8]])
        corpus = _corpus_for(model, years=[2022, 2022])
        table = yearly_topic_percentages(model, corpus, normalization=PER_TOPIC)
        assert table.percent("topic-0", 2022) == pytest.approx(100.0)

    def test_missing_date_rejected(self):
        model = _model([[0.9, 0.1]])
        record = make_record("d0")
        record.date = None
        with pytest.raises(MissingYear):
            yearly_topic_percentages(model, Corpus([record]))

    def test_unknown_normalization_rejected(self):
        model = _model([[0.9, 0.1]])
        with pytest.raises(ValueError):
            yearly_topic_percentages(model, _corpus_for(model), normalization="per_doc")


VOCAB = Vocabulary(
    terms=["alpha", "beta", "gamma"],
    index={"alpha": 0, "beta": 1, "gamma": 2},
    df=[2, 2, 1],
)


class TestTopWords:
    def test_ranked_by_probability(self):
        model = _model([[1.0]], topic_word=[[0.5, 0.2, 0.3]], vocab=VOCAB)
        assert top_words(model, 0, 2) == [("alpha", 0.5), ("gamma", 0.3)]

    def test_ties_break_lexicographically(self):
        model = _model([[1.0]], topic_word=[[0.4, 0.4, 0.2]], vocab=VOCAB)
        assert top_words(model, 0, 2) == [("alpha", 0.4), ("beta", 0.4)]

    def test_anonymous_terms_get_positional_names(self):
        model = _model([[1.0]], topic_word=[[0.5, 0.2, 0.3]])
        assert top_words(model, 0, 1) == [("term-0", 0.5)]

    def test_bad_inputs(self):
        model = _model([[1.0]], topic_word=[[0.5, 0.2, 0.3]], vocab=VOCAB)
        with pytest.raises(UnknownTopicId):
            top_words(model, 5, 2)
        with pytest.raises(ValueError):
            top_words(model, 0, 0)
        with pytest.raises(ValueError):
            top_words(model, 0, 4)


class TestLabelTopics:
    def test_partial_label_map(self):
        model = _model([[0.5, 0.5]], topic_word=[[0.5, 0.2, 0.3], [0.1, 0.6, 0.3]], vocab=VOCAB)
        summaries = label_topics(model, {0: "Economic"}, top_m=2)
        assert [s.label for s in summaries] == ["Economic", "topic-1"]
        assert summaries[0].top_words == [("alpha", 0.5), ("gamma", 0.3)]
        assert summaries[1].topic_id == 1

    def test_empty_map_uses_defaults(self):
        model = _model([[0.5, 0.5]], topic_word=[[0.5, 0.2, 0.3], [0.1, 0.6, 0.3]], vocab=VOCAB)
        assert [s.label for s in label_topics(model)] == ["topic-0", "topic-1"]

    def test_out_of_range_key_rejected(self):
        model = _model(
            [[0.4, 0.3, 0.3]],
            topic_word=[[0.5, 0.2, 0.3], [0.1, 0.6, 0.3], [0.3, 0.3, 0.4]],
            vocab=VOCAB,
        )
        with pytest.raises(UnknownTopicId):
            label_topics(model, {5: "Legal"})

    def test_load_labels_sidecar(self, tmp_path):
        path = tmp_path / "labels.json"
        path.write_text('{"0": "Economic", "2": "Legal"}', encoding="utf-8")
        assert load_labels(path) == {0: "Economic", 2: "Legal"}


class TestWordcloudWeights:
    def test_peak_term_weighs_exactly_one(self):
        model = _model([[1.0]], topic_word=[[0.5, 0.2, 0.3]], vocab=VOCAB)
        weights = wordcloud_weights(model, 0, 2)
        assert weights == [("alpha", 1.0), ("gamma", pytest.approx(0.6))]
        assert weights[0][1] == 1.0

    def test_uniform_topic_gives_all_ones(self):
        model = _model([[1.0]], topic_word=[[1 / 3, 1 / 3, 1 / 3]], vocab=VOCAB)
        assert all(w == pytest.approx(1.0) for _t, w in wordcloud_weights(model, 0, 3))

    def test_order_matches_top_words(self):
        model = _model([[1.0]], topic_word=[[0.5, 0.2, 0.3]], vocab=VOCAB)
        assert [t for t, _w in wordcloud_weights(model, 0, 3)] == [
            t for t, _w in top_words(model, 0, 3)
        ]


class TestExports:
    def _summaries(self):
        model = _model([[0.5, 0.5]], topic_word=[[0.5, 0.2, 0.3], [0.1, 0.6, 0.3]], vocab=VOCAB)
        return model, label_topics(model, {0: "Economic"}, top_m=2)

    def test_topics_json_shape_and_determinism(self, tmp_path):
        _model_, summaries = self._summaries()
        first, second = tmp_path / "t1.json", tmp_path / "t2.json"
        save_topics_json(summaries, first)
        save_topics_json(summaries, second)
        assert first.read_bytes() == second.read_bytes()
        payload = json.loads(first.read_text(encoding="utf-8"))
        assert payload[0]["label"] == "Economic"
        assert payload[0]["top_words"][0] == ["alpha", 0.5]

    def test_csv_headers(self, tmp_path):
        model = _model([[0.9, 0.1], [0.2, 0.8]])
        corpus = _corpus_for(model, years=[2020, 2021])
        shares_path = tmp_path / "shares.csv"
        save_shares_csv(topic_shares(model, corpus), shares_path)
        shares_lines = shares_path.read_text(encoding="utf-8").splitlines()
        assert shares_lines[0] == "topic,count,percent"
        assert len(shares_lines) == 3

        trends_path = tmp_path / "trends.csv"
        table = yearly_topic_percentages(model, corpus, normalization=PER_TOPIC)
        save_trends_csv(table, trends_path)
        trend_lines = trends_path.read_text(encoding="utf-8").splitlines()
        assert trend_lines[0] == "topic,year,count,percent,normalization"
        assert len(trend_lines) == 1 + 2 * 2
        assert trend_lines[1].endswith(PER_TOPIC)

        cloud_path = tmp_path / "cloud.csv"
        save_wordcloud_csv([("alpha", 1.0), ("gamma", 0.6)], cloud_path)
        cloud_lines = cloud_path.read_text(encoding="utf-8").splitlines()
        assert cloud_lines[0] == "term,weight"
        assert cloud_lines[1] == "alpha,1.0"

    def test_reloaded_model_reproduces_exports(self, tmp_path):
        matrix = DocTermMatrix(
            n_docs=3,
            n_terms=3,
            counts={(0, 0): 2, (0, 1): 1, (1, 2): 2, (2, 0): 1, (2, 2): 1},
            doc_ids=["d0", "d1", "d2"],
        )
        config = LdaConfig(n_topics=2, alpha=0.5, beta=0.2, sweeps=20, burn_in=5, seed=6)
        model = fit(matrix, config, vocab=VOCAB)
        save_model(model, tmp_path / "model.json")
        reloaded = load_model(tmp_path / "model.json")
        corpus = _corpus_for(model, years=[2020, 2021, 2021])
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        save_trends_csv(yearly_topic_percentages(model, corpus), first)
        save_trends_csv(yearly_topic_percentages(reloaded, corpus), second)
        assert first.read_bytes() == second.read_bytes()
