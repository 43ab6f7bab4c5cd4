"""Geometric probes of the normalized tag-distance spaces.

Three samplers, each repeated `count` times from per-sample derived
streams:

- similarity: two tags constrained to sit within `radius` of a random
  target; the statistic is their mutual distance.
- dissimilarity: one tag within `inner_radius` of the target, one at
  least `outer_radius` away; the statistic is their mutual distance.
- detour: three unconstrained tags; the statistic is
  d(A,B) + d(B,C) - d(A,C), negative exactly when going through B is
  a shortcut.

Normalized distances of random pairs are close to uniform, so a
constraint radius is also the approximate hit probability of one
draw. The recorded attempts count every candidate drawn for the
sample's constrained tags; detour samples record their three direct
draws.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bitstring import RngStream, Tag
from .kernels import uniform_tag_values
from .sampling import DEFAULT_MAX_ATTEMPTS, find_constrained

DEFAULT_RADIUS = 0.01
DEFAULT_INNER_RADIUS = 0.01
DEFAULT_OUTER_RADIUS = 0.99


@dataclass(frozen=True)
class GeometrySample:
    """One sampled configuration and its statistic.

    For the constrained samplers target_tag is the target R and the
    secondaries are S1 and S2 in discovery order; for detour the three
    fields hold A, B, C.
    """

    target_tag: Tag
    secondary_a: Tag
    secondary_b: Tag
    statistic: float
    attempts: int


def _check_count(count: int) -> None:
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")


def _check_radius(name: str, value: float) -> None:
    if not 0.0 < value < 1.0:
        raise ValueError(f"{name} must be in (0, 1), got {value}")


def sample_similarity(
    engine,
    radius: float = DEFAULT_RADIUS,
    count: int = 1,
    rng: RngStream = None,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
    swap_final_pair: bool = False,
) -> list:
    """Distances between pairs of tags near a common target.

    Each sample rejection-samples candidates until two fall within
    `radius` of the target (non-strict). The statistic is
    d(S1, S2) in discovery order, or d(S2, S1) with swap_final_pair;
    the order matters for the non-commutative metrics.
    """
    _check_count(count)
    _check_radius("radius", radius)
    samples = []
    for i in range(count):
        sub = rng.child(i)
        target = int(uniform_tag_values(sub.gen, 1, engine.width)[0])
        hits, attempts = find_constrained(
            engine, target, "le", radius, 2, sub.gen, max_attempts
        )
        s1 = Tag(int(hits[0]), engine.width)
        s2 = Tag(int(hits[1]), engine.width)
        first, second = (s2, s1) if swap_final_pair else (s1, s2)
        samples.append(
            GeometrySample(
                target_tag=Tag(target, engine.width),
                secondary_a=s1,
                secondary_b=s2,
                statistic=engine.distance(first, second),
                attempts=attempts,
            )
        )
    return samples


def sample_dissimilarity(
    engine,
    inner_radius: float = DEFAULT_INNER_RADIUS,
    outer_radius: float = DEFAULT_OUTER_RADIUS,
    count: int = 1,
    rng: RngStream = None,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
    swap_final_pair: bool = False,
) -> list:
    """Distances between one near and one far tag of a common target.

    S1 satisfies d(R, S1) <= inner_radius, S2 satisfies
    d(R, S2) >= outer_radius (both non-strict). The statistic is
    d(S1, S2), or d(S2, S1) with swap_final_pair.
    """
    _check_count(count)
    _check_radius("inner_radius", inner_radius)
    _check_radius("outer_radius", outer_radius)
    samples = []
    for i in range(count):
        sub = rng.child(i)
        target = int(uniform_tag_values(sub.gen, 1, engine.width)[0])
        near, attempts_near = find_constrained(
            engine, target, "le", inner_radius, 1, sub.gen, max_attempts
        )
        far, attempts_far = find_constrained(
            engine, target, "ge", outer_radius, 1, sub.gen, max_attempts
        )
        s1 = Tag(int(near[0]), engine.width)
        s2 = Tag(int(far[0]), engine.width)
        first, second = (s2, s1) if swap_final_pair else (s1, s2)
        samples.append(
            GeometrySample(
                target_tag=Tag(target, engine.width),
                secondary_a=s1,
                secondary_b=s2,
                statistic=engine.distance(first, second),
                attempts=attempts_near + attempts_far,
            )
        )
    return samples


def sample_detour(engine, count: int = 1, rng: RngStream = None) -> list:
    """Triangle-inequality probes over unconstrained random triples."""
    _check_count(count)
    samples = []
    for i in range(count):
        sub = rng.child(i)
        vals = uniform_tag_values(sub.gen, 3, engine.width)
        a = Tag(int(vals[0]), engine.width)
        b = Tag(int(vals[1]), engine.width)
        c = Tag(int(vals[2]), engine.width)
        statistic = (
            engine.distance(a, b) + engine.distance(b, c) - engine.distance(a, c)
        )
        samples.append(
            GeometrySample(
                target_tag=a,
                secondary_a=b,
                secondary_b=c,
                statistic=statistic,
                attempts=3,
            )
        )
    return samples
