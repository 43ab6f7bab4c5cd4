"""Small statistics helpers shared by the analysis modules."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bitstring import RngStream

DEFAULT_RESAMPLES = 10_000


@dataclass(frozen=True)
class Summary:
    count: int
    mean: float
    sd: float
    minimum: float
    maximum: float
    ci_lo: float
    ci_hi: float


def bootstrap_ci(
    samples,
    rng: RngStream,
    confidence: float = 0.95,
    resamples: int = DEFAULT_RESAMPLES,
) -> tuple:
    """Percentile bootstrap interval for the mean.

    Draws `resamples` same-size resamples with replacement, takes each
    mean, and returns the empirical (alpha/2, 1 - alpha/2) quantiles.
    Deterministic for a given stream.
    """
    x = np.asarray(samples, dtype=np.float64)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("samples must be a non-empty 1-d sequence")
    if not 0.0 < confidence < 1.0:
        raise ValueError(f"confidence must be in (0, 1), got {confidence}")
    if resamples < 1:
        raise ValueError(f"resamples must be >= 1, got {resamples}")
    n = x.size
    means = np.empty(resamples, dtype=np.float64)
    # Chunked so the index matrix stays within a bounded footprint.
    chunk = max(1, min(resamples, 8_000_000 // n))
    pos = 0
    while pos < resamples:
        m = min(chunk, resamples - pos)
        idx = rng.gen.integers(0, n, size=(m, n))
        means[pos : pos + m] = x[idx].mean(axis=1)
        pos += m
    alpha = 1.0 - confidence
    lo, hi = np.quantile(means, [alpha / 2.0, 1.0 - alpha / 2.0])
    return float(lo), float(hi)


def ks_uniform_statistic(samples) -> float:
    """Two-sided Kolmogorov-Smirnov statistic against Uniform[0, 1].

    D = sup_x |ECDF(x) - x|, evaluated at the sorted-sample
    breakpoints from both sides of each step.
    """
    x = np.asarray(samples, dtype=np.float64)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("samples must be a non-empty 1-d sequence")
    if np.any(~np.isfinite(x)) or np.any(x < 0.0) or np.any(x > 1.0):
        raise ValueError("samples must lie in [0, 1]")
    x = np.sort(x)
    n = x.size
    steps = np.arange(1, n + 1, dtype=np.float64) / n
    d_plus = np.max(steps - x)
    d_minus = np.max(x - (steps - 1.0 / n))
    return float(max(d_plus, d_minus))


def summarize(
    samples,
    rng: RngStream,
    confidence: float = 0.95,
    resamples: int = DEFAULT_RESAMPLES,
) -> Summary:
    """Count, mean, population sd, extrema, and a bootstrap CI."""
    x = np.asarray(samples, dtype=np.float64)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("samples must be a non-empty 1-d sequence")
    lo, hi = bootstrap_ci(x, rng, confidence=confidence, resamples=resamples)
    return Summary(
        count=int(x.size),
        mean=float(np.mean(x)),
        sd=float(np.std(x)),
        minimum=float(np.min(x)),
        maximum=float(np.max(x)),
        ci_lo=lo,
        ci_hi=hi,
    )
