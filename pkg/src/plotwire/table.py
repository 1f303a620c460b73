"""Column-oriented in-memory tables.

Each column's cells live in one contiguous numpy array plus a boolean null
mask, so scanning a coordinate touches only that column's bytes. Tables are
immutable after construction and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import SchemaError, UnknownNameError

KINDS = ("float64", "int64", "bool", "text")

_DTYPES = {
    "float64": np.float64,
    "int64": np.int64,
    "bool": np.bool_,
    "text": object,
}


@dataclass(frozen=True)
class Column:
    """One named, typed column: contiguous values plus a null mask.

    ``nulls[i]`` True means cell i is missing; the corresponding value is a
    filler (NaN / 0 / False / ""). float64 cells may also hold NaN, which
    consumers treat exactly like null.
    """

    name: str
    kind: str
    values: np.ndarray
    nulls: np.ndarray

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaError(f"unknown column kind {self.kind!r}")
        if len(self.values) != len(self.nulls):
            raise SchemaError(
                f"column {self.name!r}: null mask length {len(self.nulls)} "
                f"!= values length {len(self.values)}"
            )
        self.values.setflags(write=False)
        self.nulls.setflags(write=False)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def is_numeric(self) -> bool:
        return self.kind in ("float64", "int64")

    def missing_mask(self) -> np.ndarray:
        """Null cells, plus NaN cells for float64 columns."""
        if self.kind == "float64":
            return self.nulls | np.isnan(self.values)
        return self.nulls.copy()


def make_column(name: str, kind: str, values, nulls=None) -> Column:
    """Build a Column from any sequence, coercing dtype and default mask."""
    arr = np.asarray(values, dtype=_DTYPES[kind])
    if nulls is None:
        mask = np.zeros(len(arr), dtype=np.bool_)
    else:
        mask = np.asarray(nulls, dtype=np.bool_)
    return Column(name, kind, arr, mask)


@dataclass(frozen=True)
class ColumnTable:
    """An ordered set of equal-length columns with unique names."""

    name: str
    columns: tuple[Column, ...]
    _by_name: dict[str, Column] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        by_name: dict[str, Column] = {}
        for col in self.columns:
            if col.name in by_name:
                raise SchemaError(f"duplicate column name {col.name!r}")
            by_name[col.name] = col
        lengths = {len(c) for c in self.columns}
        if len(lengths) > 1:
            raise SchemaError(f"ragged columns: lengths {sorted(lengths)}")
        object.__setattr__(self, "_by_name", by_name)

    @property
    def row_count(self) -> int:
        return len(self.columns[0]) if self.columns else 0

    @property
    def column_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def column(self, name: str) -> Column:
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownNameError(f"no column {name!r} in table {self.name!r}") from None

    def row(self, index: int) -> dict[str, object]:
        """One row as {column name: python value}, None for null cells."""
        out: dict[str, object] = {}
        for col in self.columns:
            if col.nulls[index]:
                out[col.name] = None
            else:
                v = col.values[index]
                out[col.name] = v if col.kind == "text" else v.item()
        return out


def column_stats(table: ColumnTable, name: str) -> dict:
    """Min/max/count over the valid (non-null, non-NaN) cells of a numeric column.

    Returns {"countValid": n} plus "min"/"max" keys only when n > 0.
    """
    col = table.column(name)
    if not col.is_numeric:
        raise UnknownNameError(f"column {name!r} is {col.kind}, not numeric")
    valid = ~col.missing_mask()
    vals = col.values[valid]
    stats: dict = {"countValid": int(vals.size)}
    if vals.size:
        stats["min"] = float(vals.min())
        stats["max"] = float(vals.max())
    return stats


def tables_equal(a: ColumnTable, b: ColumnTable) -> bool:
    """Structural equality with NaN-aware float comparison (bitwise payloads)."""
    if a.column_names != b.column_names or a.row_count != b.row_count:
        return False
    for ca, cb in zip(a.columns, b.columns):
        if ca.kind != cb.kind or not np.array_equal(ca.nulls, cb.nulls):
            return False
        if ca.kind == "float64":
            # bitwise: NaN == NaN, and distinguishes -0.0 from 0.0
            if not np.array_equal(
                ca.values.view(np.uint64), cb.values.view(np.uint64)
            ):
                return False
        elif ca.kind == "text":
            if any(x != y for x, y in zip(ca.values, cb.values)):
                return False
        else:
            if not np.array_equal(ca.values, cb.values):
                return False
    return True
