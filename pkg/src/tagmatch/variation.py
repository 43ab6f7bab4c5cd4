"""Variational probes: what one bit flip does to match distance.

Two experiment families share the machinery:

- single steps: sample a (target, source) pair in a distance regime,
  flip one uniformly random source bit, record the distance change.
- walks: hold an anchor fixed while a walker accumulates uniformly
  random bit flips (with replacement, so back-mutation happens);
  record the anchor-walker distance after every flip.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .bitstring import RngStream, Tag, flip_bit
from .kernels import uniform_tag_values
from .sampling import DEFAULT_MAX_ATTEMPTS, find_constrained
from .stats import DEFAULT_RESAMPLES, bootstrap_ci


class Regime(str, Enum):
    """Pre-mutation distance regime for single-step sampling."""

    LOOSE = "loose"  # strictly farther than 0.5
    TIGHT = "tight"  # strictly closer than 0.01


REGIME_BOUNDS = {
    Regime.LOOSE: ("gt", 0.5),
    Regime.TIGHT: ("lt", 0.01),
}


class StartMode(str, Enum):
    """How a walk's walker relates to its anchor before any flips."""

    IDENTICAL = "identical"
    SAMPLED_CLOSE = "sampled-close"


SAMPLED_CLOSE_RADIUS = 0.01  # strict bound for sampled-close walkers


@dataclass(frozen=True)
class StepSample:
    regime: Regime
    target_tag: Tag
    source_tag: Tag
    flipped_index: int
    pre_distance: float
    post_distance: float
    perturbation: float


@dataclass(frozen=True)
class WalkTrace:
    start_mode: StartMode
    walk_id: int
    step_distances: tuple  # index 0 is the pre-walk distance


@dataclass(frozen=True)
class WalkStepAggregate:
    step: int
    mean: float
    sd: float
    ci_lo: float
    ci_hi: float


def sample_single_step(
    engine,
    regime: Regime,
    count: int = 1,
    rng: RngStream = None,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
) -> list:
    """Single-flip distance perturbations within one regime.

    Each sample draws a target R, rejection-samples a source S whose
    distance d(R, S) satisfies the regime bound (strict), flips one
    uniformly random bit of S, and records the signed change
    d(R, S') - d(R, S).
    """
    regime = Regime(regime)
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    comparison, bound = REGIME_BOUNDS[regime]
    samples = []
    for i in range(count):
        sub = rng.child(i)
        target_value = int(uniform_tag_values(sub.gen, 1, engine.width)[0])
        hits, _ = find_constrained(
            engine, target_value, comparison, bound, 1, sub.gen, max_attempts
        )
        target = Tag(target_value, engine.width)
        source = Tag(int(hits[0]), engine.width)
        index = int(sub.gen.integers(0, engine.width))
        mutated = flip_bit(source, index)
        pre = engine.distance(target, source)
        post = engine.distance(target, mutated)
        samples.append(
            StepSample(
                regime=regime,
                target_tag=target,
                source_tag=source,
                flipped_index=index,
                pre_distance=pre,
                post_distance=post,
                perturbation=post - pre,
            )
        )
    return samples


def mutational_walk(
    engine,
    steps: int,
    start_mode: StartMode,
    rng: RngStream,
    walk_id: int = 0,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
) -> WalkTrace:
    """One random mutational walk against a fixed anchor.

    The trace has steps + 1 entries; entry 0 is the distance before
    any flip (exactly 0 for identical starts under metrics that place
    equal tags at distance zero).
    """
    start_mode = StartMode(start_mode)
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    anchor_value = int(uniform_tag_values(rng.gen, 1, engine.width)[0])
    if start_mode is StartMode.IDENTICAL:
        walker_value = anchor_value
    else:
        hits, _ = find_constrained(
            engine, anchor_value, "lt", SAMPLED_CLOSE_RADIUS, 1, rng.gen, max_attempts
        )
        walker_value = int(hits[0])
    anchor = Tag(anchor_value, engine.width)
    walker = Tag(walker_value, engine.width)
    distances = [engine.distance(anchor, walker)]
    flips = rng.gen.integers(0, engine.width, size=steps)
    for index in flips:
        walker = flip_bit(walker, int(index))
        distances.append(engine.distance(anchor, walker))
    return WalkTrace(start_mode=start_mode, walk_id=walk_id, step_distances=tuple(distances))


def aggregate_walks(
    traces,
    rng: RngStream,
    confidence: float = 0.95,
    resamples: int = DEFAULT_RESAMPLES,
) -> list:
    """Per-step mean, population sd, and bootstrap CI over walks."""
    traces = list(traces)
    if not traces:
        raise ValueError("need at least one walk trace")
    lengths = {len(t.step_distances) for t in traces}
    if len(lengths) != 1:
        raise ValueError("walk traces have differing lengths")
    matrix = np.array([t.step_distances for t in traces], dtype=np.float64)
    aggregates = []
    for step in range(matrix.shape[1]):
        column = matrix[:, step]
        lo, hi = bootstrap_ci(column, rng.child(step), confidence, resamples)
        aggregates.append(
            WalkStepAggregate(
                step=step,
                mean=float(np.mean(column)),
                sd=float(np.std(column)),
                ci_lo=lo,
                ci_hi=hi,
            )
        )
    return aggregates


def run_walk_ensemble(
    engine,
    walks: int,
    steps: int,
    start_mode: StartMode,
    rng: RngStream,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
    confidence: float = 0.95,
    resamples: int = DEFAULT_RESAMPLES,
) -> tuple:
    """Runs an ensemble of walks; returns (traces, per-step aggregates).

    Walk i consumes the derived stream rng.child(0, i); the bootstrap
    for step s consumes rng.child(1, s). Results are independent of
    any batching, so reruns with one config are identical.
    """
    if walks < 1:
        raise ValueError(f"walks must be >= 1, got {walks}")
    traces = [
        mutational_walk(
            engine,
            steps,
            start_mode,
            rng.child(0, i),
            walk_id=i,
            max_attempts=max_attempts,
        )
        for i in range(walks)
    ]
    aggregates = aggregate_walks(traces, rng.child(1), confidence, resamples)
    return traces, aggregates
