"""Coordinate materialization: the expensive per-row work done once per
(table, expressions, filter) and reused across frames via the coordinate
cache.

A row survives into the prepared arrays when the filter passes and every
coordinate is present and finite (nulls, NaNs, and division blow-ups are
all skipped silently at this stage).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .expreval import eval_filter, eval_numeric
from .plotspec import ValidatedPlot
from .table import ColumnTable
from .view import ViewState, fallback_range, padded_range


@dataclass(frozen=True)
class PreparedCoords:
    """Valid plot rows: original indices plus compacted per-axis values."""

    indices: np.ndarray  # int64 row indices into the source table
    axes: tuple[np.ndarray, ...]  # float64, same length as indices

    @property
    def nbytes(self) -> int:
        return self.indices.nbytes + sum(a.nbytes for a in self.axes)

    def __len__(self) -> int:
        return len(self.indices)


def prepare_coords(plan: ValidatedPlot, table: ColumnTable) -> PreparedCoords:
    keep = np.ones(table.row_count, dtype=np.bool_)
    if plan.filter is not None:
        keep &= eval_filter(plan.filter, table).values
    results = [eval_numeric(expr, table) for expr in plan.coords]
    for r in results:
        keep &= ~r.missing
        keep &= np.isfinite(r.values)
    indices = np.nonzero(keep)[0].astype(np.int64)
    axes = tuple(np.ascontiguousarray(r.values[keep]) for r in results)
    return PreparedCoords(indices, axes)


def auto_range(plan: ValidatedPlot, table: ColumnTable,
               prep: PreparedCoords | None = None) -> ViewState:
    """Initial view: per-axis data min/max padded by ``plan.pad`` per side.

    Histograms get a fixed [0, 1] y axis (bar heights are normalized to the
    tallest bin). Log axes consider positive values only and fall back to
    [1, 10] when none exist; empty linear axes fall back to [0, 1].
    """
    if prep is None:
        prep = prepare_coords(plan, table)

    scales = {"x": plan.xscale, "y": plan.yscale, "z": "linear"}
    ranges: dict[str, tuple[float, float]] = {}
    for name, values in zip(plan.axis_names, prep.axes):
        scale = scales[name]
        vals = values[values > 0] if scale == "log" else values
        if vals.size == 0:
            ranges[name] = fallback_range(scale)
        else:
            ranges[name] = padded_range(float(vals.min()), float(vals.max()), scale, plan.pad)

    if plan.plot_type == "plane.histogram":
        ranges["y"] = (0.0, 1.0)
    if plan.is_cube:
        return ViewState(
            x=ranges["x"], y=ranges["y"], z=ranges["z"],
            xscale="linear", yscale="linear", rotation=np.eye(3),
        )
    return ViewState(x=ranges["x"], y=ranges["y"], xscale=plan.xscale, yscale=plan.yscale)
