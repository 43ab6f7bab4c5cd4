import numpy as np
import pytest
import hypothesis.strategies as st
from hypothesis import given, settings

from tagmatch.bitstring import derive_stream
from tagmatch.metrics import MetricKind
from tagmatch.normalizer import (
    NormalizationTable,
    TableFormatError,
    UnsupportedVersionError,
    build_table,
    load_table,
    normalize,
    normalize_batch,
    save_table,
)


def _table(entries, metric=MetricKind.HAMMING, width=8):
    entries = np.asarray(entries, dtype=np.float64)
    return NormalizationTable(
        metric=metric,
        width=width,
        entries=entries,
        sample_count=len(entries) - 2,
        build_seed=0,
    )


def test_interpolation_between_entries():
    t = _table([0.0, 0.2, 0.4, 0.6, 1.0])
    # 0.5 sits halfway between entries 2 and 3 of 5 -> (2 + 0.5) / 4
    assert normalize(t, 0.5) == 0.625
    assert normalize(t, 0.0) == 0.0
    assert normalize(t, 1.0) == 1.0


def test_exact_match_uses_mean_percentile():
    t = _table([0.0, 0.2, 0.4, 0.6, 1.0])
    assert normalize(t, 0.4) == 0.5  # single tie at position 2 of 5


def test_tied_entries_share_one_percentile():
    t = _table([0.0, 0.2, 0.2, 0.2, 1.0])
    # positions 1..3 all hold 0.2; mean of percentiles 0.25, 0.5, 0.75
    assert normalize(t, 0.2) == 0.5
    # and values on either side stay ordered around the tie
    assert normalize(t, 0.19) < 0.25
    assert normalize(t, 0.21) > 0.75


def test_rejects_out_of_range_raw():
    t = _table([0.0, 0.5, 1.0])
    with pytest.raises(ValueError):
        normalize(t, -0.01)
    with pytest.raises(ValueError):
        normalize(t, 1.01)


def test_table_shape_validation():
    with pytest.raises(ValueError):
        _table([0.1, 0.5, 1.0])  # missing low sentinel
    with pytest.raises(ValueError):
        _table([0.0, 0.5, 0.9])  # missing high sentinel
    with pytest.raises(ValueError):
        _table([0.0, 0.6, 0.5, 1.0])  # not sorted
    with pytest.raises(ValueError):
        NormalizationTable(
            metric=MetricKind.HAMMING,
            width=8,
            entries=np.array([0.0, 0.5, 1.0]),
            sample_count=7,
            build_seed=0,
        )


@st.composite
def tables_and_raws(draw):
    body = draw(
        st.lists(st.floats(min_value=0.0, max_value=1.0, allow_nan=False), min_size=1, max_size=40)
    )
    entries = np.array(sorted([0.0] + body + [1.0]))
    raws = draw(
        st.lists(st.floats(min_value=0.0, max_value=1.0, allow_nan=False), min_size=2, max_size=20)
    )
    return _table(entries), raws


@given(tables_and_raws())
def test_normalization_is_monotone_and_bounded(case):
    table, raws = case
    out = normalize_batch(table, np.array(raws))
    assert np.all(out >= 0.0) and np.all(out <= 1.0)
    order = np.argsort(raws, kind="stable")
    assert np.all(np.diff(out[order]) >= 0.0)


@given(tables_and_raws())
def test_batch_equals_scalar(case):
    table, raws = case
    out = normalize_batch(table, np.array(raws))
    for r, o in zip(raws, out):
        assert normalize(table, r) == o


def test_build_table_structure():
    rng = derive_stream(5, 0)
    table = build_table(MetricKind.INTEGER, 16, rng, 500)
    assert len(table.entries) == 502
    assert table.entries[0] == 0.0 and table.entries[-1] == 1.0
    assert np.all(np.diff(table.entries) >= 0.0)
    assert table.sample_count == 500
    assert not table.entries.flags.writeable
    # same stream key -> identical table
    again = build_table(MetricKind.INTEGER, 16, derive_stream(5, 0), 500)
    assert np.array_equal(table.entries, again.entries)
    assert table.build_seed == again.build_seed


def test_build_table_normalizes_its_own_population():
    # normalized random-pair distances should be roughly uniform
    rng = derive_stream(6, 0)
    table = build_table(MetricKind.HASH, 32, rng, 2_000)
    mid = normalize(table, 0.5)
    assert 0.4 < mid < 0.6


def test_round_trip_is_exact(tmp_path):
    table = build_table(MetricKind.STREAK, 32, derive_stream(7, 0), 300)
    path = tmp_path / "streak.table"
    save_table(table, path)
    loaded = load_table(path)
    assert loaded.metric == table.metric
    assert loaded.width == table.width
    assert loaded.sample_count == table.sample_count
    assert loaded.build_seed == table.build_seed
    assert np.array_equal(loaded.entries, table.entries)  # repr round-trips floats


def _write(tmp_path, text):
    path = tmp_path / "broken.table"
    path.write_text(text)
    return path


def test_load_rejects_unsupported_version(tmp_path):
    with pytest.raises(UnsupportedVersionError, match="version 2"):
        load_table(_write(tmp_path, "version 2\nmetric hamming\nwidth 8\n"))


def test_load_names_the_broken_field(tmp_path):
    with pytest.raises(TableFormatError, match="version"):
        load_table(_write(tmp_path, "not a table\n"))
    with pytest.raises(TableFormatError, match="metric"):
        load_table(_write(tmp_path, "version 1\nmetric cosine\nwidth 8\n"))
    with pytest.raises(TableFormatError, match="width"):
        load_table(_write(tmp_path, "version 1\nmetric hamming\nwidth x\n"))
    head = "version 1\nmetric hamming\nwidth 8\nsample_count 1\nbuild_seed 0\n"
    with pytest.raises(TableFormatError, match="entries"):
        load_table(_write(tmp_path, head + "0.0\n1.0\n"))  # one entry short
    with pytest.raises(TableFormatError, match="entries"):
        load_table(_write(tmp_path, head + "0.0\nabc\n1.0\n"))
    with pytest.raises(TableFormatError, match="entries"):
        load_table(_write(tmp_path, head + "0.0\n2.0\n1.0\n"))  # bad sentinel tail
    with pytest.raises(TableFormatError, match="sample_count"):
        load_table(_write(tmp_path, "version 1\nmetric hamming\nwidth 8\nsample_count 0\n"))
