import pytest

from tagmatch import MetricKind, build_engine, derive_stream

UNIT_WIDTH = 32
UNIT_TABLE_SAMPLES = 2_000  # small tables keep unit tests quick


@pytest.fixture(scope="session")
def engines():
    """One engine per metric at width 32, shared across the unit tests."""
    return {
        kind: build_engine(kind, UNIT_WIDTH, derive_stream(99, 0).child(i), UNIT_TABLE_SAMPLES)
        for i, kind in enumerate(MetricKind)
    }
