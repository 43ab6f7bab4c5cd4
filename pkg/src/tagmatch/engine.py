"""Match engines: a metric plus its normalization table.

An engine answers normalized distance queries for tags of one fixed
width. Argument order is (query, operand) throughout; the integer and
hash metrics are sensitive to it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bitstring import RngStream, Tag
from .kernels import raw_distance_batch
from .metrics import MetricKind, raw_distance
from .normalizer import (
    DEFAULT_SAMPLE_COUNT,
    NormalizationTable,
    build_table,
    normalize_batch,
)


@dataclass(frozen=True)
class MatchEngine:
    """Normalized distance queries for one (metric, width) pair."""

    metric: MetricKind
    width: int
    table: NormalizationTable

    def __post_init__(self) -> None:
        if self.table.metric != self.metric:
            raise ValueError(
                f"table metric {self.table.metric.value!r} does not match "
                f"engine metric {MetricKind(self.metric).value!r}"
            )
        if self.table.width != self.width:
            raise ValueError(
                f"table width {self.table.width} does not match engine width {self.width}"
            )

    def _check_tag(self, tag: Tag) -> None:
        if tag.width != self.width:
            raise ValueError(f"tag width {tag.width} does not match engine width {self.width}")

    def distance(self, query: Tag, operand: Tag) -> float:
        """Normalized match distance in [0, 1]."""
        self._check_tag(query)
        self._check_tag(operand)
        raw = raw_distance(self.metric, query, operand)
        return float(normalize_batch(self.table, np.array([raw]))[0])

    def distance_batch(self, query_values: np.ndarray, operand_values: np.ndarray) -> np.ndarray:
        """Normalized distances over packed uint64 tag values."""
        raw = raw_distance_batch(self.metric, query_values, operand_values, self.width)
        return normalize_batch(self.table, raw)

    def best_k_matches(self, query: Tag, operands, k: int) -> list:
        """Indices of the k closest operands, ascending by distance.

        Ties break toward the lower operand index. The scan is linear;
        operand sets here are small by design.
        """
        ops = list(operands)
        if not ops:
            raise ValueError("operands must be non-empty")
        if not 1 <= k <= len(ops):
            raise ValueError(f"k must be in [1, {len(ops)}], got {k}")
        distances = [self.distance(query, op) for op in ops]
        order = sorted(range(len(ops)), key=lambda i: (distances[i], i))
        return order[:k]


@dataclass(frozen=True)
class RawMatchEngine:
    """Engine look-alike that skips normalization; for exploration.

    Raw distances are not uniform, so constraint radii mean different
    things per metric here. The analysis samplers accept either kind.
    """

    metric: MetricKind
    width: int

    def distance(self, query: Tag, operand: Tag) -> float:
        if query.width != self.width or operand.width != self.width:
            raise ValueError("tag width does not match engine width")
        return raw_distance(self.metric, query, operand)

    def distance_batch(self, query_values: np.ndarray, operand_values: np.ndarray) -> np.ndarray:
        return raw_distance_batch(self.metric, query_values, operand_values, self.width)


def build_engine(
    metric: MetricKind,
    width: int,
    rng: RngStream,
    sample_count: int = DEFAULT_SAMPLE_COUNT,
) -> MatchEngine:
    """Builds the normalization table and wraps it in an engine."""
    metric = MetricKind(metric)
    table = build_table(metric, width, rng, sample_count)
    return MatchEngine(metric=metric, width=width, table=table)
