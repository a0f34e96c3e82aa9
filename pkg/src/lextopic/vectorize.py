"""Vocabulary construction, sparse counts, and TF-IDF weighting."""

from __future__ import annotations

import csv
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import AllZero, EmptyVocabulary
from .preprocess import Document

__all__ = [
    "Vocabulary",
    "DocTermMatrix",
    "TfidfMatrix",
    "build_vocabulary",
    "count_matrix",
    "idf",
    "tfidf",
    "to_pseudo_counts",
    "save_triplets",
    "save_vocabulary",
]


@dataclass
class Vocabulary:
    terms: list[str]
    index: dict[str, int]
    df: list[int]

    def __len__(self) -> int:
        return len(self.terms)


@dataclass
class DocTermMatrix:
    n_docs: int
    n_terms: int
    counts: dict[tuple[int, int], int]
    doc_ids: list[str]

    def rows(self) -> list[list[tuple[int, int]]]:
        """Per-document [(term, count), ...] lists, term-sorted; cached."""
        cached = getattr(self, "_rows", None)
        if cached is None:
            cached = [[] for _ in range(self.n_docs)]
            for (doc, term), count in self.counts.items():
                cached[doc].append((term, count))
            for row in cached:
                row.sort()
            self._rows = cached
        return cached

    def doc_totals(self) -> list[int]:
        totals = [0] * self.n_docs
        for (doc, _), count in self.counts.items():
            totals[doc] += count
        return totals

    def entries(self):
        for doc, row in enumerate(self.rows()):
            for term, count in row:
                yield doc, term, count


@dataclass
class TfidfMatrix:
    n_docs: int
    n_terms: int
    weights: dict[tuple[int, int], float]
    doc_ids: list[str]
    norm: str = "l2"

    def entries(self):
        for key in sorted(self.weights):
            yield key[0], key[1], self.weights[key]


def build_vocabulary(
    docs: list[Document], min_df: int = 2, max_df_ratio: float = 0.95
) -> Vocabulary:
    """Retain terms with min_df <= df <= max_df_ratio * D.

    Term order is descending document frequency, ties broken
    lexicographically, so rebuilding from identical docs is stable.
    """
    if not docs:
        raise ValueError("cannot build a vocabulary from zero documents")
    if min_df < 1:
        raise ValueError(f"min_df must be >= 1, got {min_df}")
    if not (0.0 < max_df_ratio <= 1.0):
        raise ValueError(f"max_df_ratio must be in (0, 1], got {max_df_ratio}")
    doc_freq: Counter = Counter()
    for doc in docs:
        doc_freq.update(set(doc.tokens))
    # Small epsilon so max_df_ratio=0.95 over D=20 admits df=19 exactly.
    ceiling = max_df_ratio * len(docs) + 1e-9
    kept = [
        (term, df_count)
        for term, df_count in doc_freq.items()
        if min_df <= df_count <= ceiling
    ]
    if not kept:
        raise EmptyVocabulary()
    kept.sort(key=lambda item: (-item[1], item[0]))
    terms = [term for term, _ in kept]
    return Vocabulary(
        terms=terms,
        index={term: position for position, term in enumerate(terms)},
        df=[df_count for _, df_count in kept],
    )


def count_matrix(docs: list[Document], vocab: Vocabulary) -> DocTermMatrix:
    """Sparse (doc, term) -> occurrences; out-of-vocabulary tokens dropped."""
    counts: dict[tuple[int, int], int] = {}
    for position, doc in enumerate(docs):
        tally = Counter(doc.tokens)
        for token, count in tally.items():
            term = vocab.index.get(token)
            if term is not None:
                counts[(position, term)] = count
    return DocTermMatrix(
        n_docs=len(docs),
        n_terms=len(vocab),
        counts=counts,
        doc_ids=[doc.record_id for doc in docs],
    )


def idf(matrix: DocTermMatrix) -> np.ndarray:
    """Smoothed inverse document frequency: ln((1+D)/(1+df)) + 1.

    Document frequency is recomputed from the matrix sparsity pattern,
    so the result is well defined even when the vocabulary was built
    from a superset of these documents.
    """
    df_vector = np.zeros(matrix.n_terms, dtype=np.int64)
    for (_, term) in matrix.counts:
        df_vector[term] += 1
    return np.log((1.0 + matrix.n_docs) / (1.0 + df_vector)) + 1.0


def tfidf(matrix: DocTermMatrix, norm: str = "l2") -> TfidfMatrix:
    """weight(d,t) = count(d,t) * idf(t), with optional l2 row norm."""
    if norm not in ("none", "l2"):
        raise ValueError(f"norm must be 'none' or 'l2', got {norm!r}")
    idf_vector = idf(matrix)
    weights = {key: count * idf_vector[key[1]] for key, count in matrix.counts.items()}
    if norm == "l2":
        row_norms = [0.0] * matrix.n_docs
        for (doc, _), weight in weights.items():
            row_norms[doc] += weight * weight
        row_norms = [math.sqrt(total) for total in row_norms]
        weights = {
            (doc, term): weight / row_norms[doc]
            for (doc, term), weight in weights.items()
        }
    return TfidfMatrix(
        n_docs=matrix.n_docs,
        n_terms=matrix.n_terms,
        weights=weights,
        doc_ids=list(matrix.doc_ids),
        norm=norm,
    )


def to_pseudo_counts(weights: TfidfMatrix, scale: float = 10.0) -> DocTermMatrix:
    """Round scale * weight to integers (halves up); zero results dropped.

    Bridges real-valued weights into the integer-count representation
    the topic sampler consumes.
    """
    if scale <= 0:
        raise ValueError(f"scale must be positive, got {scale}")
    counts: dict[tuple[int, int], int] = {}
    for key, weight in weights.weights.items():
        pseudo = math.floor(scale * weight + 0.5)
        if pseudo > 0:
            counts[key] = pseudo
    if not counts and weights.weights:
        raise AllZero(scale)
    return DocTermMatrix(
        n_docs=weights.n_docs,
        n_terms=weights.n_terms,
        counts=counts,
        doc_ids=list(weights.doc_ids),
    )


def save_triplets(matrix, vocab: Vocabulary, path) -> None:
    """Triplet CSV doc_id,term,value ordered by (doc, term)."""
    with Path(path).open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["doc_id", "term", "value"])
        for doc, term, value in matrix.entries():
            writer.writerow([matrix.doc_ids[doc], vocab.terms[term], repr(value) if isinstance(value, float) else value])


def save_vocabulary(vocab: Vocabulary, path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["term", "df"])
        for term, df_count in zip(vocab.terms, vocab.df):
            writer.writerow([term, df_count])
