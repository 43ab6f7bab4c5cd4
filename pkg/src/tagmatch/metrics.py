"""Raw match-distance metrics over equal-width bitstring tags.

Every metric maps a (query, operand) tag pair to a float in [0, 1].
Raw values are not comparable across metrics; the normalizer module
rescales them onto a common empirical percentile scale. Argument
order matters for the non-commutative metrics (integer, hash).
"""

from __future__ import annotations

import hashlib
import struct
from enum import Enum

from .bitstring import Tag, pack_tag


class MetricKind(str, Enum):
    """Names of the supported metrics, as used by the CLI and files."""

    HAMMING = "hamming"
    HASH = "hash"
    INTEGER = "integer"
    INTEGER_BI = "integer-bi"
    STREAK = "streak"


METRIC_NAMES = tuple(kind.value for kind in MetricKind)

COMMUTATIVE = {
    MetricKind.HAMMING: True,
    MetricKind.HASH: False,
    MetricKind.INTEGER: False,
    MetricKind.INTEGER_BI: True,
    MetricKind.STREAK: True,
}


def _check_pair(t: Tag, u: Tag) -> None:
    if t.width != u.width:
        raise ValueError(f"tag widths differ: {t.width} vs {u.width}")


def hamming_raw(t: Tag, u: Tag) -> float:
    """Fraction of positions at which the two tags disagree."""
    _check_pair(t, u)
    return (t.value ^ u.value).bit_count() / t.width


def integer_raw(t: Tag, u: Tag) -> float:
    """Wrap-around upward count from t to u, as a fraction of 2**width.

    Reads both tags as unsigned integers and counts upward from t,
    wrapping past the maximum value, until u is reached. Not
    commutative: for t != u the two orders sum to exactly 1.
    """
    _check_pair(t, u)
    span = 1 << t.width
    return ((u.value - t.value) % span) / span


def integer_bi_raw(t: Tag, u: Tag) -> float:
    """The smaller of the two integer_raw directions; at most 0.5."""
    _check_pair(t, u)
    span = 1 << t.width
    d = (u.value - t.value) % span
    return min(d, span - d) / span


def _longest_one_run(x: int) -> int:
    # Each AND-with-shift pass shortens every run of ones by one, so the
    # pass count equals the longest run length.
    count = 0
    while x:
        x &= x << 1
        count += 1
    return count


def longest_match_streak(t: Tag, u: Tag) -> int:
    """Length of the longest run of consecutive agreeing positions."""
    _check_pair(t, u)
    mask = (1 << t.width) - 1
    return _longest_one_run(~(t.value ^ u.value) & mask)


def longest_mismatch_streak(t: Tag, u: Tag) -> int:
    """Length of the longest run of consecutive disagreeing positions."""
    _check_pair(t, u)
    return _longest_one_run(t.value ^ u.value)


def streak_rarity(length: int, width: int) -> float:
    """Approximate rarity weight of a streak of the given length.

    Computed as (width - length + 1) / 2**length. The form is a rough
    upper bound rather than a probability: short streaks give weights
    above 1 (length 0 gives width + 1). It is kept as-is because the
    streak distance only consumes ratios of these weights.
    """
    if not 0 <= length <= width:
        raise ValueError(f"streak length {length} out of range for width {width}")
    return (width - length + 1) / (1 << length)


def streak_raw(t: Tag, u: Tag) -> float:
    """Distance from the rarity of match versus mismatch streaks.

    A long shared streak is rare, so its rarity weight is small and
    the ratio drops toward 0; a long disagreeing streak drives the
    ratio toward 1. Equal tags therefore score near 0 and exact
    complements near 1. The result is clamped to [0, 1] to guard the
    edge cases of the rarity approximation.
    """
    _check_pair(t, u)
    p_match = streak_rarity(longest_match_streak(t, u), t.width)
    p_mismatch = streak_rarity(longest_mismatch_streak(t, u), t.width)
    return min(1.0, max(0.0, p_match / (p_match + p_mismatch)))


def hash_raw(t: Tag, u: Tag) -> float:
    """Pseudo-random but deterministic distance from a digest.

    Args:
        t: Query tag.
        u: Operand tag; must have the same width as t.

    Returns:
        k / 2**64 where k is the first 8 bytes, read big-endian, of
        the SHA-1 digest of t's packed bytes followed by u's packed
        bytes. The value lies in [0, 1), is identical across runs and
        platforms, and carries no structure: in particular equal tags
        do not score near 0, and swapping the arguments gives an
        unrelated value.
    """
    _check_pair(t, u)
    digest = hashlib.sha1(pack_tag(t) + pack_tag(u)).digest()
    (k,) = struct.unpack(">Q", digest[:8])
    return k / 2**64


_DISPATCH = {
    MetricKind.HAMMING: hamming_raw,
    MetricKind.HASH: hash_raw,
    MetricKind.INTEGER: integer_raw,
    MetricKind.INTEGER_BI: integer_bi_raw,
    MetricKind.STREAK: streak_raw,
}


def raw_distance(kind: MetricKind, t: Tag, u: Tag) -> float:
    """Dispatches to the named metric with (query, operand) order."""
    try:
        fn = _DISPATCH[MetricKind(kind)]
    except (KeyError, ValueError):
        raise ValueError(f"unknown metric kind: {kind!r}") from None
    return fn(t, u)
