import numpy as np
import pytest

from tagmatch.bitstring import Tag, derive_stream
from tagmatch.metrics import MetricKind
from tagmatch.sampling import SamplingBudgetError, find_constrained


def _engine(engines):
    return engines[MetricKind.INTEGER]


def test_finds_constrained_values(engines):
    engine = _engine(engines)
    rng = derive_stream(40, 0)
    reference = 12345
    values, attempts = find_constrained(engine, reference, "le", 0.05, 4, rng.gen)
    assert len(values) == 4
    assert attempts >= 4
    for v in values:
        assert engine.distance(Tag(reference, 32), Tag(int(v), 32)) <= 0.05


def test_strict_comparisons(engines):
    engine = _engine(engines)
    rng = derive_stream(40, 1)
    values, _ = find_constrained(engine, 99, "gt", 0.5, 8, rng.gen)
    for v in values:
        assert engine.distance(Tag(99, 32), Tag(int(v), 32)) > 0.5


def test_budget_error_carries_context(engines):
    engine = _engine(engines)
    rng = derive_stream(40, 2)
    with pytest.raises(SamplingBudgetError) as info:
        find_constrained(engine, 7, "le", 1e-9, 1, rng.gen, max_attempts=40)
    err = info.value
    assert err.metric is MetricKind.INTEGER
    assert err.max_attempts == 40
    assert "40" in str(err) and "integer" in str(err)


def test_budget_is_per_constrained_value(engines):
    # an easy bound must succeed even when needed * typical draws
    # exceeds max_attempts, because the budget resets at each hit
    engine = _engine(engines)
    rng = derive_stream(40, 3)
    values, attempts = find_constrained(engine, 5, "le", 0.5, 50, rng.gen, max_attempts=64)
    assert len(values) == 50
    assert attempts <= 50 * 64


def test_deterministic_given_stream(engines):
    engine = _engine(engines)
    a = find_constrained(engine, 1, "ge", 0.3, 6, derive_stream(41, 0).gen)
    b = find_constrained(engine, 1, "ge", 0.3, 6, derive_stream(41, 0).gen)
    assert np.array_equal(a[0], b[0])
    assert a[1] == b[1]
