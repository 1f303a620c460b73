import io
import struct

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plotwire.errors import FormatError
from plotwire.pwct import (
    PwctReader, expected_file_size, load_columnar, save_columnar,
)
from plotwire.table import ColumnTable, make_column, tables_equal


def roundtrip(tmp_path, table):
    path = tmp_path / "t.pwct"
    save_columnar(table, path)
    return load_columnar(path), path


def test_empty_table_roundtrips(tmp_path):
    t = ColumnTable("t", ())
    back, path = roundtrip(tmp_path, t)
    assert tables_equal(t, back)
    assert path.stat().st_size == expected_file_size(t) == 20


def test_nan_and_null_roundtrip(tmp_path):
    t = ColumnTable("t", (
        make_column("v", "float64", [1.0, np.nan, -0.0], nulls=[False, False, True]),
        make_column("n", "int64", [5, 0, 7], nulls=[False, True, False]),
    ))
    back, _ = roundtrip(tmp_path, t)
    assert tables_equal(t, back)
    # -0.0 preserved bitwise
    assert np.signbit(back.column("v").values[2])


def test_bad_magic_rejected(tmp_path):
    p = tmp_path / "x.pwct"
    p.write_bytes(b"XXXX" + bytes(16))
    with pytest.raises(FormatError, match="magic"):
        load_columnar(p)


def test_truncated_mid_column_names_column(tmp_path):
    t = ColumnTable("t", (
        make_column("alpha", "float64", [1.0, 2.0]),
        make_column("beta", "float64", [3.0, 4.0]),
    ))
    p = tmp_path / "t.pwct"
    save_columnar(t, p)
    raw = p.read_bytes()
    p.write_bytes(raw[:-10])  # cut into beta's payload
    with pytest.raises(FormatError, match="beta") as err:
        load_columnar(p)
    assert err.value.offset is not None


def test_exact_size_of_wide_float_table(tmp_path):
    # 10^6 rows x 10 float64 columns: payload 8e7 bytes + computable header
    n = 1_000_000
    zeros = np.zeros(n)
    t = ColumnTable("big", tuple(
        make_column(f"c{i}", "float64", zeros) for i in range(10)
    ))
    p = tmp_path / "big.pwct"
    save_columnar(t, p)
    size = p.stat().st_size
    mask = (n + 7) // 8
    header = 20 + sum(2 + len(f"c{i}") + 1 + mask for i in range(10))
    assert size == expected_file_size(t) == 8 * 10**7 + header
    assert abs(size - (8 * 10**7 + header)) <= 0.01 * 8 * 10**7


class RecordingFile:
    """File wrapper logging every byte range actually read."""

    def __init__(self, f):
        self._f = f
        self.reads: list[tuple[int, int]] = []

    def read(self, n=-1):
        start = self._f.tell()
        data = self._f.read(n)
        if data:
            self.reads.append((start, len(data)))
        return data

    def seek(self, *args):
        return self._f.seek(*args)

    def tell(self):
        return self._f.tell()


def _column_regions(table):
    """(mask_start, payload_end) per column, from the format layout."""
    regions = {}
    offset = 20
    mask = (table.row_count + 7) // 8
    for col in table.columns:
        offset += 2 + len(col.name.encode()) + 1
        start = offset
        offset += mask
        if col.kind in ("float64", "int64"):
            offset += 8 * table.row_count
        elif col.kind == "bool":
            offset += mask
        else:
            offset += sum(4 + len(v.encode()) for v in col.values)
        regions[col.name] = (start, offset)
    return regions


def test_single_column_scan_touches_no_other_columns_bytes(tmp_path, rng):
    n = 10_000
    t = ColumnTable("t", tuple(
        make_column(name, "float64", rng.random(n)) for name in "abcd"
    ))
    p = tmp_path / "t.pwct"
    save_columnar(t, p)
    regions = _column_regions(t)

    with open(p, "rb") as f:
        rec = RecordingFile(f)
        reader = PwctReader(rec)
        col = reader.read_column(2)  # column "c"
    assert np.array_equal(col.values, t.column("c").values)
    tgt_start, tgt_end = regions["c"]
    for name, (start, end) in regions.items():
        if name == "c":
            continue
        for read_start, length in rec.reads:
            read_end = read_start + length
            assert not (read_start < end and read_end > start), (
                f"scan of 'c' read bytes of column {name!r}"
            )


def test_text_column_skip_reads_only_length_prefixes(tmp_path):
    t = ColumnTable("t", (
        make_column("words", "text", ["abcdefgh" * 4, "q" * 100]),
        make_column("v", "int64", [1, 2]),
    ))
    p = tmp_path / "t.pwct"
    save_columnar(t, p)
    with open(p, "rb") as f:
        rec = RecordingFile(f)
        reader = PwctReader(rec)
        reader.read_column(1)
    # each skip over a text record reads exactly its 4-byte length
    text_reads = [length for _, length in rec.reads if length == 4]
    assert len(text_reads) >= 2
    assert all(length <= 32 for _, length in rec.reads)


_names = st.lists(
    st.text(st.characters(codec="utf-8", exclude_characters="\x00"), min_size=1, max_size=8),
    min_size=0, max_size=5, unique=True,
)
_floats = st.floats(allow_nan=True, allow_infinity=True, width=64)


@st.composite
def tables(draw):
    names = draw(_names)
    n = draw(st.integers(min_value=0, max_value=40))
    cols = []
    for name in names:
        kind = draw(st.sampled_from(["float64", "int64", "bool", "text"]))
        nulls = draw(st.lists(st.booleans(), min_size=n, max_size=n))
        if kind == "float64":
            values = draw(st.lists(_floats, min_size=n, max_size=n))
        elif kind == "int64":
            values = draw(st.lists(
                st.integers(min_value=-(2**63), max_value=2**63 - 1),
                min_size=n, max_size=n))
        elif kind == "bool":
            values = draw(st.lists(st.booleans(), min_size=n, max_size=n))
        else:
            values = np.empty(n, dtype=object)
            values[:] = draw(st.lists(st.text(max_size=12), min_size=n, max_size=n))
        cols.append(make_column(name, kind, values, nulls))
    return ColumnTable("t", tuple(cols))


@settings(max_examples=80, deadline=None)
@given(tables())
def test_roundtrip_property(tmp_path_factory, table):
    buf = io.BytesIO()

    class _Path:  # save/load take paths; run through a temp file per example
        pass

    import tempfile, os
    fd, name = tempfile.mkstemp(suffix=".pwct")
    os.close(fd)
    try:
        save_columnar(table, name)
        back = load_columnar(name, table_name="t")
        assert tables_equal(table, back)
        assert os.path.getsize(name) == expected_file_size(table)
    finally:
        os.unlink(name)


def test_version_field_checked(tmp_path):
    t = ColumnTable("t", (make_column("a", "int64", [1]),))
    p = tmp_path / "t.pwct"
    save_columnar(t, p)
    raw = bytearray(p.read_bytes())
    raw[4:8] = struct.pack("<I", 9)
    p.write_bytes(bytes(raw))
    with pytest.raises(FormatError, match="version"):
        load_columnar(p)
