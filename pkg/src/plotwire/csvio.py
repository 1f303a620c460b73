"""CSV ingestion with per-column type inference.

Kinds are inferred per column as the narrowest of int64 / float64 / bool /
text that fits every non-empty cell; empty cells become nulls. bool wins
only when every non-empty cell is literally ``true`` or ``false``; otherwise
the numeric path applies, falling back to text.
"""

from __future__ import annotations

import csv
import re
from pathlib import Path

import numpy as np

from .errors import ParseError, SchemaError
from .table import Column, ColumnTable

_INT_RE = re.compile(r"[+-]?\d+\Z")
# float() also accepts underscores and surrounding whitespace; we do not
_FLOAT_RE = re.compile(
    r"[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?\Z|[+-]?(?i:nan|inf|infinity)\Z"
)

_INT64_MIN = -(2**63)
_INT64_MAX = 2**63 - 1


def _fits_int64(cell: str) -> bool:
    if not _INT_RE.match(cell):
        return False
    return _INT64_MIN <= int(cell) <= _INT64_MAX


def infer_kind(cells: list[str]) -> str:
    """Narrowest kind fitting all non-empty cells of one column."""
    nonempty = [c for c in cells if c != ""]
    if not nonempty:
        return "text"
    if all(c in ("true", "false") for c in nonempty):
        return "bool"
    if all(_fits_int64(c) for c in nonempty):
        return "int64"
    if all(_FLOAT_RE.match(c) for c in nonempty):
        return "float64"
    return "text"


def _build_column(name: str, cells: list[str]) -> Column:
    kind = infer_kind(cells)
    nulls = np.array([c == "" for c in cells], dtype=np.bool_)
    if kind == "bool":
        values = np.array([c == "true" for c in cells], dtype=np.bool_)
    elif kind == "int64":
        values = np.array(
            [0 if c == "" else int(c) for c in cells], dtype=np.int64
        )
    elif kind == "float64":
        values = np.array(
            [np.nan if c == "" else float(c) for c in cells], dtype=np.float64
        )
    else:
        values = np.array(cells, dtype=object)
    return Column(name, kind, values, nulls)


def load_csv(path: str | Path, table_name: str | None = None) -> ColumnTable:
    """Parse an RFC-4180 CSV file (mandatory header row) into a ColumnTable.

    Raises ParseError with the offending physical line number for ragged
    rows, SchemaError for duplicate header names.
    """
    path = Path(path)
    name = table_name if table_name is not None else path.stem
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty file: missing header row", offset=1) from None
        if len(set(header)) != len(header):
            dupes = sorted({h for h in header if header.count(h) > 1})
            raise SchemaError(f"duplicate header names: {dupes}")
        cols: list[list[str]] = [[] for _ in header]
        for row in reader:
            if not row:
                # csv.reader yields [] for a blank line: that's a null cell
                # in a one-column table, a skippable separator otherwise
                if len(header) == 1:
                    row = [""]
                else:
                    continue
            if len(row) != len(header):
                raise ParseError(
                    f"row has {len(row)} fields, expected {len(header)}",
                    offset=reader.line_num,
                )
            for store, cell in zip(cols, row):
                store.append(cell)
    columns = tuple(_build_column(h, c) for h, c in zip(header, cols))
    return ColumnTable(name, columns)
