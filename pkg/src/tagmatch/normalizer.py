"""Empirical-CDF normalization of raw metric distances.

Raw metrics put their mass in metric-specific, often tiny, regions of
[0, 1]. To make distances comparable across metrics, each (metric,
width) pair gets a table of sorted raw distances sampled from random
tag pairs; normalizing a raw value maps it to its percentile within
that table. Normalized distances of random pairs are then close to
Uniform[0, 1] for every metric.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bitstring import RngStream, derive_seed, draw_tag_values, new_random_tag
from .kernels import raw_distance_batch
from .metrics import MetricKind, raw_distance

FORMAT_VERSION = 1

DEFAULT_SAMPLE_COUNT = 10_000


class TableFormatError(ValueError):
    """A table file violated the format; the message names the field."""


class UnsupportedVersionError(TableFormatError):
    """The table file declares a version this code does not read."""


@dataclass(frozen=True)
class NormalizationTable:
    """Sorted raw-distance samples for one (metric, width) pair.

    Entries are ascending, begin with the sentinel 0.0 and end with
    the sentinel 1.0, so their length is sample_count + 2. Entry i
    sits at percentile i / (len - 1).
    """

    metric: MetricKind
    width: int
    entries: np.ndarray
    sample_count: int
    build_seed: int

    def __post_init__(self) -> None:
        e = self.entries
        if e.ndim != 1 or len(e) != self.sample_count + 2:
            raise ValueError("entries must hold sample_count + 2 values")
        if e[0] != 0.0 or e[-1] != 1.0:
            raise ValueError("entries must start at 0.0 and end at 1.0")
        if np.any(np.diff(e) < 0):
            raise ValueError("entries must be sorted ascending")


def build_table(
    metric: MetricKind,
    width: int,
    rng: RngStream,
    sample_count: int = DEFAULT_SAMPLE_COUNT,
) -> NormalizationTable:
    """Samples random tag pairs and builds their sorted raw-distance table.

    Deterministic for a given (metric, width, sample_count) and rng
    identity. The recorded build_seed fingerprints the stream used.
    """
    metric = MetricKind(metric)
    if width < 1:
        raise ValueError(f"tag width must be >= 1, got {width}")
    if sample_count < 1:
        raise ValueError(f"sample_count must be >= 1, got {sample_count}")
    if width <= 64:
        t = draw_tag_values(rng, sample_count, width)
        u = draw_tag_values(rng, sample_count, width)
        raw = raw_distance_batch(metric, t, u, width)
    else:
        raw = np.array(
            [
                raw_distance(metric, new_random_tag(rng, width), new_random_tag(rng, width))
                for _ in range(sample_count)
            ]
        )
    entries = np.concatenate(([0.0], np.sort(raw), [1.0]))
    entries.flags.writeable = False
    return NormalizationTable(
        metric=metric,
        width=width,
        entries=entries,
        sample_count=sample_count,
        build_seed=derive_seed(rng.root_seed, *rng.stream_key),
    )


def normalize_batch(table: NormalizationTable, raws: np.ndarray) -> np.ndarray:
    """Maps raw distances to their percentile position in the table.

    A raw value equal to one or more table entries gets the mean of
    the tied entries' percentiles; any other value is interpolated
    linearly between the two flanking entries. The map is monotone
    and sends 0.0 to 0.0 and 1.0 to 1.0 whenever those raw values
    occur only as the sentinels.
    """
    r = np.asarray(raws, dtype=np.float64)
    if r.size and (np.any(~np.isfinite(r)) or np.any(r < 0.0) or np.any(r > 1.0)):
        raise ValueError("raw distances must lie in [0, 1]")
    entries = table.entries
    denom = len(entries) - 1
    lo = np.searchsorted(entries, r, side="left")
    hi = np.searchsorted(entries, r, side="right")
    out = np.empty(r.shape, dtype=np.float64)

    exact = hi > lo
    # Mean percentile of the tied entries lo..hi-1.
    out[exact] = (lo[exact] + hi[exact] - 1) * 0.5 / denom

    inexact = ~exact
    if np.any(inexact):
        # Sentinels bracket every non-matching value, so 1 <= j <= denom.
        j = lo[inexact]
        e_below = entries[j - 1]
        e_above = entries[j]
        frac = (r[inexact] - e_below) / (e_above - e_below)
        out[inexact] = (j - 1 + frac) / denom
    return out


def normalize(table: NormalizationTable, raw: float) -> float:
    """Scalar convenience wrapper around normalize_batch."""
    return float(normalize_batch(table, np.array([raw]))[0])


def save_table(table: NormalizationTable, path) -> None:
    """Writes the versioned text format; round-trips exactly."""
    lines = [
        f"version {FORMAT_VERSION}",
        f"metric {table.metric.value}",
        f"width {table.width}",
        f"sample_count {table.sample_count}",
        f"build_seed {table.build_seed}",
    ]
    lines.extend(repr(float(v)) for v in table.entries)
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines))
        fh.write("\n")


def _header_value(lines: list, index: int, key: str) -> str:
    if index >= len(lines) or not lines[index].startswith(key + " "):
        raise TableFormatError(f"table header line {index + 1} must be '{key} <value>'")
    return lines[index][len(key) + 1 :]


def load_table(path) -> NormalizationTable:
    """Reads a table file, validating every field it names."""
    with open(path, "r", encoding="ascii") as fh:
        lines = fh.read().splitlines()

    version_text = _header_value(lines, 0, "version")
    try:
        version = int(version_text)
    except ValueError:
        raise TableFormatError(f"version is not an integer: {version_text!r}") from None
    if version != FORMAT_VERSION:
        raise UnsupportedVersionError(f"unsupported table version {version}")

    metric_text = _header_value(lines, 1, "metric")
    try:
        metric = MetricKind(metric_text)
    except ValueError:
        raise TableFormatError(f"unknown metric {metric_text!r}") from None

    def int_field(index: int, key: str) -> int:
        text = _header_value(lines, index, key)
        try:
            value = int(text)
        except ValueError:
            raise TableFormatError(f"{key} is not an integer: {text!r}") from None
        if value < 1:
            raise TableFormatError(f"{key} must be positive, got {value}")
        return value

    width = int_field(2, "width")
    sample_count = int_field(3, "sample_count")
    seed_text = _header_value(lines, 4, "build_seed")
    try:
        build_seed = int(seed_text)
    except ValueError:
        raise TableFormatError(f"build_seed is not an integer: {seed_text!r}") from None

    entry_lines = lines[5:]
    if len(entry_lines) != sample_count + 2:
        raise TableFormatError(
            f"entries: expected {sample_count + 2} lines, found {len(entry_lines)}"
        )
    try:
        entries = np.array([float(v) for v in entry_lines], dtype=np.float64)
    except ValueError:
        raise TableFormatError("entries: non-numeric value") from None
    if np.any(~np.isfinite(entries)) or entries[0] != 0.0 or entries[-1] != 1.0:
        raise TableFormatError("entries: must start at 0.0 and end at 1.0")
    if np.any(np.diff(entries) < 0):
        raise TableFormatError("entries: not sorted ascending")
    entries.flags.writeable = False
    return NormalizationTable(
        metric=metric,
        width=width,
        entries=entries,
        sample_count=sample_count,
        build_seed=build_seed,
    )
