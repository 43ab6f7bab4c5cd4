"""Rejection sampling of tags under a distance constraint.

Shared by the geometric and variational samplers. Candidates are
drawn in batches and checked vectorized; the draw budget is enforced
per constrained tag.
"""

from __future__ import annotations

import operator

import numpy as np

from .kernels import uniform_tag_values

DEFAULT_MAX_ATTEMPTS = 10_000_000

_BATCH = 256

_COMPARE = {
    "le": operator.le,
    "ge": operator.ge,
    "lt": operator.lt,
    "gt": operator.gt,
}

_COMPARE_TEXT = {"le": "<=", "ge": ">=", "lt": "<", "gt": ">"}


class SamplingBudgetError(RuntimeError):
    """No tag satisfied the constraint within the draw budget."""

    def __init__(self, metric, constraint: str, max_attempts: int) -> None:
        self.metric = metric
        self.constraint = constraint
        self.max_attempts = max_attempts
        super().__init__(
            f"metric {metric.value!r}: no tag with distance {constraint} "
            f"within {max_attempts} draws"
        )


def find_constrained(
    engine,
    reference_value: int,
    comparison: str,
    bound: float,
    needed: int,
    gen: np.random.Generator,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
) -> tuple:
    """Draws random tags until `needed` satisfy the constraint.

    The constraint is distance(reference, candidate) <comparison>
    <bound>, with the reference as the query. Returns (values, draws)
    where values is a uint64 array in discovery order and draws counts
    every candidate consumed. The budget applies to each constrained
    tag separately: more than max_attempts draws since the previous
    hit raises SamplingBudgetError.
    """
    if needed < 1:
        raise ValueError(f"needed must be >= 1, got {needed}")
    if max_attempts < 1:
        raise ValueError(f"max_attempts must be >= 1, got {max_attempts}")
    cmp = _COMPARE[comparison]
    constraint = f"{_COMPARE_TEXT[comparison]} {bound!r}"

    found = []
    total = 0
    since_hit = 0  # draws spent on the current tag
    while True:
        allowance = max_attempts - since_hit
        if allowance <= 0:
            raise SamplingBudgetError(engine.metric, constraint, max_attempts)
        m = min(_BATCH, allowance)
        candidates = uniform_tag_values(gen, m, engine.width)
        ref = np.full(m, reference_value, dtype=np.uint64)
        distances = engine.distance_batch(ref, candidates)
        hits = np.flatnonzero(cmp(distances, bound))
        start = 0
        for h in hits:
            consumed = int(h) - start + 1
            total += consumed
            since_hit = 0
            start = int(h) + 1
            found.append(int(candidates[h]))
            if len(found) == needed:
                return np.array(found, dtype=np.uint64), total
        tail = m - start
        total += tail
        since_hit += tail
