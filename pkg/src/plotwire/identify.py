"""Map a clicked graphics position back to the nearest plotted table row."""

from __future__ import annotations

import math

import numpy as np

from . import kernels
from .errors import RangeError
from .plotspec import ValidatedPlot
from .prep import PreparedCoords, prepare_coords
from .table import ColumnTable
from .view import ViewState, Viewport, axis_to_graphics, data_to_graphics_2d, data_to_graphics_3d


def identify_row(plan: ValidatedPlot, table: ColumnTable, view: ViewState,
                 viewport: Viewport, gx: float, gy: float, radius: float,
                 prep: PreparedCoords | None = None):
    """Nearest plotted row within ``radius`` px of graphics point (gx, gy).

    Returns (row index, distance in px) or None. Rows skipped by the filter
    or missing coordinates are never returned. Distance ties resolve to the
    lowest row index; on cube plots the point nearest the viewer wins first.
    Histograms match on horizontal distance only (bars have no row y).
    """
    if radius < 0:
        raise RangeError(f"identify radius must be >= 0, got {radius}")
    if prep is None:
        prep = prepare_coords(plan, table)
    if len(prep) == 0:
        return None

    if plan.is_cube:
        xs, ys, depth = data_to_graphics_3d(view, viewport, *prep.axes)
        idx, d2 = kernels.nearest_point_depth(
            xs, ys, depth, gx, gy, radius, viewport.width, viewport.height
        )
    elif plan.plot_type == "plane.histogram":
        xs = axis_to_graphics(prep.axes[0], *view.x, view.xscale, viewport.width, flip=False)
        ys = np.full(len(xs), 0.5)
        idx, d2 = kernels.nearest_point(
            xs, ys, gx, 0.5, radius, viewport.width, viewport.height
        )
    else:
        xs, ys = data_to_graphics_2d(view, viewport, prep.axes[0], prep.axes[1])
        idx, d2 = kernels.nearest_point(
            xs, ys, gx, gy, radius, viewport.width, viewport.height
        )
    if idx < 0:
        return None
    return int(prep.indices[idx]), math.sqrt(d2)
