"""Tabular count/percentage tables shared by the corpus and analyze stages."""

from __future__ import annotations

from dataclasses import dataclass

PER_TOPIC = "per_topic"
PER_YEAR = "per_year"


@dataclass
class TrendTable:
    """Counts and percentages over row labels x column labels.

    Rows are law types or topic labels; columns are years (or a single
    synthetic column for one-dimensional share tables).  ``normalization``
    declares the axis whose groups sum to 100: ``per_topic`` normalizes
    each row, ``per_year`` each column.  Groups with zero counts stay
    all-zero.
    """

    axis_rows: list[str]
    axis_cols: list
    counts: list[list[int]]
    percentages: list[list[float]]
    normalization: str

    def total(self) -> int:
        return sum(sum(row) for row in self.counts)

    def cell(self, row_label: str, col_label) -> int:
        return self.counts[self.axis_rows.index(row_label)][self.axis_cols.index(col_label)]

    def percent(self, row_label: str, col_label) -> float:
        return self.percentages[self.axis_rows.index(row_label)][self.axis_cols.index(col_label)]


def build_trend_table(
    axis_rows: list[str],
    axis_cols: list,
    counts: list[list[int]],
    normalization: str = PER_TOPIC,
) -> TrendTable:
    if normalization not in (PER_TOPIC, PER_YEAR):
        raise ValueError(f"unknown normalization {normalization!r}")
    n_rows, n_cols = len(axis_rows), len(axis_cols)
    percentages = [[0.0] * n_cols for _ in range(n_rows)]
    if normalization == PER_TOPIC:
        for i in range(n_rows):
            row_total = sum(counts[i])
            if row_total:
                for j in range(n_cols):
                    percentages[i][j] = 100.0 * counts[i][j] / row_total
    else:
        for j in range(n_cols):
            col_total = sum(counts[i][j] for i in range(n_rows))
            if col_total:
                for i in range(n_rows):
                    percentages[i][j] = 100.0 * counts[i][j] / col_total
    return TrendTable(axis_rows, axis_cols, counts, percentages, normalization)
