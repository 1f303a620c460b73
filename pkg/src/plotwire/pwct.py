"""PWCT v1: a minimal column-oriented binary table format.

Little-endian layout:

    magic "PWCT" | version u32 = 1 | columnCount u32 | rowCount u64
    then per column:
        nameLen u16, UTF-8 name
        kind u8 (0=float64, 1=int64, 2=bool, 3=text)
        null mask, ceil(rowCount/8) bytes, bit i = row i null, LSB-first
        payload:
            float64/int64  8 * rowCount bytes
            bool           ceil(rowCount/8) bytes, LSB-first
            text           rowCount records of u32 byteLen + UTF-8 bytes

Columns are stored back to back, so one column can be scanned without
touching any other column's payload bytes: fixed-width payloads are skipped
by seeking, text payloads by hopping over the length prefixes.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import FormatError
from .table import Column, ColumnTable

MAGIC = b"PWCT"
VERSION = 1

_KIND_CODES = {"float64": 0, "int64": 1, "bool": 2, "text": 3}
_CODE_KINDS = {v: k for k, v in _KIND_CODES.items()}


def _mask_bytes(row_count: int) -> int:
    return (row_count + 7) // 8


def _pack_bits(mask: np.ndarray) -> bytes:
    return np.packbits(mask.astype(np.uint8), bitorder="little").tobytes()


def _unpack_bits(raw: bytes, row_count: int) -> np.ndarray:
    bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")
    return bits[:row_count].astype(np.bool_)


def save_columnar(table: ColumnTable, path: str | Path) -> None:
    """Write a table as PWCT; load_columnar reproduces it bit-exactly."""
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<IIQ", VERSION, len(table.columns), table.row_count))
        for col in table.columns:
            name = col.name.encode("utf-8")
            f.write(struct.pack("<H", len(name)))
            f.write(name)
            f.write(struct.pack("<B", _KIND_CODES[col.kind]))
            f.write(_pack_bits(col.nulls))
            if col.kind in ("float64", "int64"):
                f.write(np.ascontiguousarray(col.values).astype(
                    "<f8" if col.kind == "float64" else "<i8", copy=False
                ).tobytes())
            elif col.kind == "bool":
                f.write(_pack_bits(col.values))
            else:
                for v in col.values:
                    raw = v.encode("utf-8")
                    f.write(struct.pack("<I", len(raw)))
                    f.write(raw)


class PwctReader:
    """Navigates a PWCT file, reading one column at a time.

    Per-column name/kind headers are read to locate columns; other columns'
    payload bytes are skipped by seeking, never read (for text columns only
    the 4-byte record length prefixes are touched).
    """

    def __init__(self, f):
        self._f = f
        self._read_header()
        # lazily discovered start offsets of per-column headers
        self._col_offsets: list[int] = [f.tell()]
        self._names: list[str | None] = [None] * self.column_count

    def _need(self, n: int, what: str) -> bytes:
        raw = self._f.read(n)
        if len(raw) != n:
            raise FormatError(
                f"truncated file: expected {n} bytes for {what}",
                offset=self._f.tell(),
            )
        return raw

    def _read_header(self):
        magic = self._f.read(4)
        if magic != MAGIC:
            raise FormatError(f"bad magic {magic!r}, expected {MAGIC!r}")
        version, ncols, nrows = struct.unpack("<IIQ", self._need(16, "file header"))
        if version != VERSION:
            raise FormatError(f"unsupported PWCT version {version}")
        self.column_count = int(ncols)
        self.row_count = int(nrows)

    def _read_col_header(self, index: int) -> tuple[str, str]:
        (name_len,) = struct.unpack("<H", self._need(2, f"column {index} name length"))
        name = self._need(name_len, f"column {index} name").decode("utf-8")
        (code,) = struct.unpack("<B", self._need(1, f"column {name!r} kind"))
        if code not in _CODE_KINDS:
            raise FormatError(f"column {name!r}: unknown kind code {code}")
        self._names[index] = name
        return name, _CODE_KINDS[code]

    def _skip_payload(self, kind: str, name: str):
        nrows = self.row_count
        if kind in ("float64", "int64"):
            self._f.seek(8 * nrows, 1)
        elif kind == "bool":
            self._f.seek(_mask_bytes(nrows), 1)
        else:
            for i in range(nrows):
                (blen,) = struct.unpack(
                    "<I", self._need(4, f"column {name!r} text record {i}")
                )
                self._f.seek(blen, 1)

    def _seek_column(self, index: int) -> tuple[str, str]:
        """Position the stream at column ``index``'s null mask."""
        while len(self._col_offsets) <= index:
            known = len(self._col_offsets) - 1
            self._f.seek(self._col_offsets[known])
            name, kind = self._read_col_header(known)
            self._f.seek(_mask_bytes(self.row_count), 1)
            self._skip_payload(kind, name)
            self._col_offsets.append(self._f.tell())
        self._f.seek(self._col_offsets[index])
        return self._read_col_header(index)

    def read_column(self, index: int) -> Column:
        if not 0 <= index < self.column_count:
            raise FormatError(f"no column index {index}")
        name, kind = self._seek_column(index)
        nrows = self.row_count
        nulls = _unpack_bits(self._need(_mask_bytes(nrows), f"column {name!r} null mask"), nrows)
        if kind in ("float64", "int64"):
            raw = self._need(8 * nrows, f"column {name!r} payload")
            dtype = "<f8" if kind == "float64" else "<i8"
            values = np.frombuffer(raw, dtype=dtype).astype(
                np.float64 if kind == "float64" else np.int64, copy=False
            )
        elif kind == "bool":
            values = _unpack_bits(self._need(_mask_bytes(nrows), f"column {name!r} payload"), nrows)
        else:
            out = []
            for i in range(nrows):
                (blen,) = struct.unpack(
                    "<I", self._need(4, f"column {name!r} text record {i}")
                )
                out.append(self._need(blen, f"column {name!r} text record {i}").decode("utf-8"))
            values = np.array(out, dtype=object)
        return Column(name, kind, values, nulls)


def load_columnar(path: str | Path, table_name: str | None = None) -> ColumnTable:
    """Inverse of save_columnar."""
    path = Path(path)
    name = table_name if table_name is not None else path.stem
    with open(path, "rb") as f:
        reader = PwctReader(f)
        columns = tuple(reader.read_column(i) for i in range(reader.column_count))
    return ColumnTable(name, columns)


def expected_file_size(table: ColumnTable) -> int:
    """Exact on-disk size of a table under the layout above."""
    size = 4 + 4 + 4 + 8
    mask = _mask_bytes(table.row_count)
    for col in table.columns:
        size += 2 + len(col.name.encode("utf-8")) + 1 + mask
        if col.kind in ("float64", "int64"):
            size += 8 * table.row_count
        elif col.kind == "bool":
            size += mask
        else:
            size += sum(4 + len(v.encode("utf-8")) for v in col.values)
    return size
