"""Turn (plan, table, view, viewport) into an RGBA frame.

Rendering is a pure function of its inputs: identical arguments produce a
bitwise-identical pixel buffer regardless of kernel backend. All float to
pixel-index conversions round half-even via the shared kernel convention.
``bare=True`` paints the data layer only, with no box/ticks/labels, which is
what pixel-equality tests compare.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .colormaps import COLORMAPS
from .plotspec import ValidatedPlot
from .prep import PreparedCoords, prepare_coords
from .table import ColumnTable
from .ticks import format_tick, ticks_for_axis
from .view import (
    ViewState, Viewport, axis_to_graphics, data_to_graphics_2d,
    data_to_graphics_3d,
)

_BLACK = np.array([0, 0, 0, 255], dtype=np.uint8)
_BAR_COLOR = np.array([70, 130, 180, 255], dtype=np.uint8)
_FRAME_GREY = np.array([170, 170, 170, 255], dtype=np.uint8)
_SQRT3 = math.sqrt(3.0)

# 5x7 pixel glyphs for tick labels (digits, sign, point, exponent marker)
_GLYPHS = {
    "0": (".XXX.", "X...X", "X..XX", "X.X.X", "XX..X", "X...X", ".XXX."),
    "1": ("..X..", ".XX..", "..X..", "..X..", "..X..", "..X..", ".XXX."),
    "2": (".XXX.", "X...X", "....X", "...X.", "..X..", ".X...", "XXXXX"),
    "3": (".XXX.", "X...X", "....X", "..XX.", "....X", "X...X", ".XXX."),
    "4": ("...X.", "..XX.", ".X.X.", "X..X.", "XXXXX", "...X.", "...X."),
    "5": ("XXXXX", "X....", "XXXX.", "....X", "....X", "X...X", ".XXX."),
    "6": (".XXX.", "X....", "X....", "XXXX.", "X...X", "X...X", ".XXX."),
    "7": ("XXXXX", "....X", "...X.", "..X..", ".X...", ".X...", ".X..."),
    "8": (".XXX.", "X...X", "X...X", ".XXX.", "X...X", "X...X", ".XXX."),
    "9": (".XXX.", "X...X", "X...X", ".XXXX", "....X", "....X", ".XXX."),
    ".": (".....", ".....", ".....", ".....", ".....", "..X..", "..X.."),
    "-": (".....", ".....", ".....", "XXXXX", ".....", ".....", "....."),
    "+": (".....", "..X..", "..X..", "XXXXX", "..X..", "..X..", "....."),
    "e": (".....", ".....", ".XXX.", "X...X", "XXXXX", "X....", ".XXX."),
}


@dataclass(frozen=True)
class Frame:
    width: int
    height: int
    pixels: np.ndarray  # (height, width, 4) uint8
    seq: int
    view: ViewState

    def __post_init__(self):
        assert self.pixels.shape == (self.height, self.width, 4)


def _pixel_index(g: float) -> int:
    return int(np.rint(g - 0.5))


def render(plan: ValidatedPlot, table: ColumnTable, view: ViewState,
           viewport: Viewport, *, prep: PreparedCoords | None = None,
           bare: bool = False, seq: int = 0) -> Frame:
    if prep is None:
        prep = prepare_coords(plan, table)
    w, h = viewport.width, viewport.height
    pixels = np.full((h, w, 4), 255, dtype=np.uint8)

    if plan.plot_type == "cube.scatter":
        if not bare:
            _draw_cube_frame(pixels, view, viewport)
        _paint_cube(pixels, plan, view, viewport, prep)
    elif plan.plot_type == "plane.density":
        _paint_density(pixels, plan, view, viewport, prep)
    elif plan.plot_type == "plane.histogram":
        _paint_histogram(pixels, plan, view, viewport, prep)
    else:
        _paint_scatter(pixels, plan, view, viewport, prep)

    if not bare and not plan.is_cube:
        _draw_axes(pixels, view, viewport)
    pixels.setflags(write=False)
    return Frame(w, h, pixels, seq, view)


def density_counts(plan: ValidatedPlot, view: ViewState, viewport: Viewport,
                   prep: PreparedCoords) -> np.ndarray:
    """The pre-colormap bin count grid for a density plot."""
    gx, gy = data_to_graphics_2d(view, viewport, prep.axes[0], prep.axes[1])
    return kernels.density_grid(gx, gy, viewport.width, viewport.height, plan.binpx)


def histogram_counts(plan: ValidatedPlot, view: ViewState,
                     prep: PreparedCoords) -> np.ndarray:
    """Bin counts over the current x range (log axes bin in log10 space)."""
    t = axis_to_graphics(prep.axes[0], *view.x, view.xscale, 1.0, flip=False)
    return kernels.hist_counts(t, plan.nbins)


def _paint_scatter(pixels, plan, view, viewport, prep):
    gx, gy = data_to_graphics_2d(view, viewport, prep.axes[0], prep.axes[1])
    mask = kernels.paint_mask(gx, gy, plan.size, viewport.width, viewport.height)
    pixels[mask.astype(bool)] = _BLACK


def _paint_density(pixels, plan, view, viewport, prep):
    grid = density_counts(plan, view, viewport, prep)
    maxn = int(grid.max()) if grid.size else 0
    if maxn == 0:
        return
    if plan.logcount:
        norm = np.log10(1.0 + grid) / math.log10(1.0 + maxn)
    else:
        norm = grid / float(maxn)
    idx = np.rint(255.0 * norm).astype(np.int64)
    rgb = COLORMAPS[plan.colormap][idx]  # (ny, nx, 3)
    occupied = grid > 0
    big_occ = np.repeat(np.repeat(occupied, plan.binpx, 0), plan.binpx, 1)
    big_rgb = np.repeat(np.repeat(rgb, plan.binpx, 0), plan.binpx, 1)
    hsel = big_occ[: viewport.height, : viewport.width]
    pixels[..., :3][hsel] = big_rgb[: viewport.height, : viewport.width][hsel]


def _paint_histogram(pixels, plan, view, viewport, prep):
    counts = histogram_counts(plan, view, prep)
    maxc = int(counts.max()) if counts.size else 0
    if maxc == 0:
        return
    w, h = viewport.width, viewport.height
    base_g = float(axis_to_graphics(0.0, *view.y, "linear", h, flip=True))
    base = min(_pixel_index(base_g), h)
    for i in range(plan.nbins):
        if counts[i] == 0:
            continue
        frac = counts[i] / maxc
        top_g = float(axis_to_graphics(frac, *view.y, "linear", h, flip=True))
        top = max(_pixel_index(top_g), 0)
        x0 = max(_pixel_index(w * i / plan.nbins), 0)
        x1 = w if i == plan.nbins - 1 else _pixel_index(w * (i + 1) / plan.nbins)
        if top < base and x0 < min(x1, w):
            pixels[top:base, x0 : min(x1, w)] = _BAR_COLOR


def _paint_cube(pixels, plan, view, viewport, prep):
    gx, gy, depth = data_to_graphics_3d(view, viewport, *prep.axes)
    # nearer points paint later and darker; shade fixed to the rotated cube
    shade = np.rint(180.0 * (1.0 - (depth + _SQRT3) / (2.0 * _SQRT3)))
    order = np.argsort(depth, kind="stable")
    img = kernels.paint_shaded(
        gx, gy, shade, order, plan.size, viewport.width, viewport.height
    )
    sel = img >= 0
    grey = img[sel].astype(np.uint8)
    pixels[sel, 0] = grey
    pixels[sel, 1] = grey
    pixels[sel, 2] = grey


# ---------------------------------------------------------------------------
# decorations


def _draw_axes(pixels, view: ViewState, viewport: Viewport):
    h, w = pixels.shape[:2]
    pixels[0, :] = _BLACK
    pixels[h - 1, :] = _BLACK
    pixels[:, 0] = _BLACK
    pixels[:, w - 1] = _BLACK
    for v in ticks_for_axis(*view.x, view.xscale):
        g = float(axis_to_graphics(v, *view.x, view.xscale, w, flip=False))
        px = _pixel_index(g)
        if 1 <= px < w - 1:
            pixels[h - 7 : h - 1, px] = _BLACK
            _draw_text(pixels, px + 2, h - 16, format_tick(v))
    for v in ticks_for_axis(*view.y, view.yscale):
        g = float(axis_to_graphics(v, *view.y, view.yscale, h, flip=True))
        py = _pixel_index(g)
        if 1 <= py < h - 1:
            pixels[py, 1:7] = _BLACK
            _draw_text(pixels, 9, py + 2, format_tick(v))


_CUBE_EDGES = (
    (0, 1), (0, 2), (0, 4), (1, 3), (1, 5), (2, 3),
    (2, 6), (3, 7), (4, 5), (4, 6), (5, 7), (6, 7),
)


def _draw_cube_frame(pixels, view: ViewState, viewport: Viewport):
    corners = np.array(
        [[x, y, z] for x in (-1.0, 1.0) for y in (-1.0, 1.0) for z in (-1.0, 1.0)]
    )
    p = corners @ view.rotation.T
    gx = viewport.width * (0.5 + p[:, 0] / 2.0)
    gy = viewport.height * (0.5 - p[:, 1] / 2.0)
    for a, b in _CUBE_EDGES:
        _draw_line(
            pixels,
            _pixel_index(gx[a]), _pixel_index(gy[a]),
            _pixel_index(gx[b]), _pixel_index(gy[b]),
        )


def _draw_line(pixels, x0: int, y0: int, x1: int, y1: int):
    """Bresenham segment in frame grey, clipped per pixel."""
    h, w = pixels.shape[:2]
    dx = abs(x1 - x0)
    dy = -abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx + dy
    while True:
        if 0 <= x0 < w and 0 <= y0 < h:
            pixels[y0, x0] = _FRAME_GREY
        if x0 == x1 and y0 == y1:
            return
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            x0 += sx
        if e2 <= dx:
            err += dx
            y0 += sy


def _draw_text(pixels, x: int, y: int, text: str):
    h, w = pixels.shape[:2]
    for ch in text:
        glyph = _GLYPHS.get(ch)
        if glyph is not None:
            for row, bits in enumerate(glyph):
                for col, bit in enumerate(bits):
                    if bit == "X" and 0 <= y + row < h and 0 <= x + col < w:
                        pixels[y + row, x + col] = _BLACK
        x += 6
