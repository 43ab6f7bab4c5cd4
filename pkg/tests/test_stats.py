import math
from fractions import Fraction

import numpy as np
import pytest
import hypothesis.strategies as st
from hypothesis import given, settings

from tagmatch.bitstring import derive_stream
from tagmatch.stats import bootstrap_ci, ks_uniform_statistic, summarize


def _ks_oracle(samples):
    """Exact KS statistic against Uniform[0,1] in rational arithmetic."""
    xs = sorted(Fraction(x) for x in samples)
    n = len(xs)
    best = Fraction(0)
    for i, x in enumerate(xs, start=1):
        best = max(best, Fraction(i, n) - x, x - Fraction(i - 1, n))
    return float(best)


def test_ks_single_midpoint():
    assert ks_uniform_statistic(np.array([0.5])) == 0.5


def test_ks_plotting_positions():
    # i/(n+1) positions deviate by exactly 1/(n+1)
    n = 9
    xs = np.array([i / (n + 1) for i in range(1, n + 1)])
    assert ks_uniform_statistic(xs) == pytest.approx(0.1)


def test_ks_degenerate_zero():
    assert ks_uniform_statistic(np.zeros(10)) == 1.0


def test_ks_centered_grid():
    n = 8
    xs = (np.arange(n) + 0.5) / n
    assert ks_uniform_statistic(xs) == pytest.approx(0.5 / n)


@settings(max_examples=200)
@given(st.lists(st.floats(min_value=0.0, max_value=1.0, allow_nan=False), min_size=1, max_size=50))
def test_ks_matches_rational_oracle(xs):
    assert ks_uniform_statistic(np.array(xs)) == pytest.approx(_ks_oracle(xs), abs=1e-12)


def test_ks_input_validation():
    with pytest.raises(ValueError):
        ks_uniform_statistic(np.array([]))
    with pytest.raises(ValueError):
        ks_uniform_statistic(np.array([1.5]))


def test_summarize_against_fsum():
    gen = derive_stream(13, 0).gen
    xs = gen.random(100_000)
    s = summarize(xs, derive_stream(13, 1))
    mean = math.fsum(xs) / len(xs)
    var = math.fsum((x - mean) ** 2 for x in xs) / len(xs)  # population variance
    assert s.count == len(xs)
    assert s.mean == pytest.approx(mean, abs=1e-12)
    assert s.sd == pytest.approx(math.sqrt(var), abs=1e-12)
    assert s.minimum == xs.min()
    assert s.maximum == xs.max()
    assert s.ci_lo <= s.mean <= s.ci_hi


def test_bootstrap_ci_shrinks_with_sample_size():
    gen = derive_stream(14, 0).gen
    small = bootstrap_ci(gen.random(50), derive_stream(14, 1), resamples=2_000)
    large = bootstrap_ci(gen.random(5_000), derive_stream(14, 2), resamples=2_000)
    assert (large[1] - large[0]) < (small[1] - small[0])


def test_bootstrap_ci_deterministic():
    xs = derive_stream(15, 0).gen.random(200)
    a = bootstrap_ci(xs, derive_stream(15, 1), resamples=1_000)
    b = bootstrap_ci(xs, derive_stream(15, 1), resamples=1_000)
    assert a == b


def test_bootstrap_coverage():
    # the 95% interval should cover the true mean most of the time;
    # 0.85 keeps the check insensitive to small-sample bootstrap quirks
    hits = 0
    sims = 120
    for i in range(sims):
        xs = derive_stream(16, i).gen.random(60)  # true mean 0.5
        lo, hi = bootstrap_ci(xs, derive_stream(17, i), resamples=500)
        hits += lo <= 0.5 <= hi
    assert hits / sims >= 0.85


def test_bootstrap_degenerate_samples():
    xs = np.full(25, 0.25)
    lo, hi = bootstrap_ci(xs, derive_stream(18, 0), resamples=100)
    assert lo == hi == 0.25
