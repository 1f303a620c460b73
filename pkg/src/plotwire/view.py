"""View state and the graphics/data coordinate algebra.

A ViewState plus a Viewport fully determines where a data point lands:

    linear axis   gx = width * (x - lo) / (hi - lo)
    log axis      gx = width * (log10 x - log10 lo) / (log10 hi - log10 lo)

y is mirrored (data up is graphics down-flip). 3D points are centered and
normalized per axis to [-1, 1], rotated, then orthographically projected so
that at identity rotation the result matches the 2D formulas exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import RangeError, UnsupportedError

_ORTHO_TOL = 1e-12


def _check_axis(name: str, lo: float, hi: float, scale: str):
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise RangeError(f"{name} axis range [{lo}, {hi}] must satisfy lo < hi")
    if scale not in ("linear", "log"):
        raise RangeError(f"{name} axis scale {scale!r} must be linear or log")
    if scale == "log" and lo <= 0:
        raise RangeError(f"log {name} axis needs lo > 0, got {lo}")


@dataclass(frozen=True)
class ViewState:
    """Axis ranges, scale kinds, and (for cube plots) an orthonormal rotation."""

    x: tuple[float, float]
    y: tuple[float, float]
    xscale: str = "linear"
    yscale: str = "linear"
    z: tuple[float, float] | None = None
    rotation: np.ndarray | None = None  # 3x3, cube only

    def __post_init__(self):
        _check_axis("x", *self.x, self.xscale)
        _check_axis("y", *self.y, self.yscale)
        if self.z is not None:
            _check_axis("z", *self.z, "linear")
            rot = np.asarray(
                self.rotation if self.rotation is not None else np.eye(3),
                dtype=np.float64,
            )
            if rot.shape != (3, 3):
                raise RangeError("rotation must be a 3x3 matrix")
            if np.abs(rot.T @ rot - np.eye(3)).max() > _ORTHO_TOL:
                raise RangeError("rotation must be orthonormal")
            if abs(np.linalg.det(rot) - 1.0) > _ORTHO_TOL:
                raise RangeError("rotation must have determinant 1")
            rot.setflags(write=False)
            object.__setattr__(self, "rotation", rot)
        elif self.rotation is not None:
            raise RangeError("rotation only applies to cube views")

    @property
    def is_cube(self) -> bool:
        return self.z is not None

    def to_json_dict(self) -> dict:
        out = {
            "x": list(self.x),
            "y": list(self.y),
            "xscale": self.xscale,
            "yscale": self.yscale,
        }
        if self.is_cube:
            out["z"] = list(self.z)
            out["rotation"] = [[float(v) for v in row] for row in self.rotation]
        return out


@dataclass(frozen=True)
class Viewport:
    width: int
    height: int

    def __post_init__(self):
        if self.width < 8 or self.height < 8:
            raise RangeError(f"viewport {self.width}x{self.height} below 8x8 minimum")


# navigation actions


@dataclass(frozen=True)
class Pan:
    dx: float
    dy: float


@dataclass(frozen=True)
class Zoom:
    factor: float
    cx: float
    cy: float


@dataclass(frozen=True)
class Rotate:
    yaw: float
    pitch: float


NavAction = Pan | Zoom | Rotate


# ---------------------------------------------------------------------------
# axis transforms (vectorized; scalars pass through as 0-d arrays)


def axis_to_graphics(v, lo: float, hi: float, scale: str, extent: float, flip: bool):
    """Data values -> graphics coordinate along one axis; NaN where undefined."""
    v = np.asarray(v, dtype=np.float64)
    if scale == "log":
        with np.errstate(all="ignore"):
            t = np.where(v > 0, np.log10(v), np.nan)
        lo, hi = math.log10(lo), math.log10(hi)
    else:
        t = v
    if flip:
        return extent * (hi - t) / (hi - lo)
    return extent * (t - lo) / (hi - lo)


def graphics_to_axis(g, lo: float, hi: float, scale: str, extent: float, flip: bool):
    """Inverse of axis_to_graphics on one axis."""
    g = np.asarray(g, dtype=np.float64)
    tlo, thi = (math.log10(lo), math.log10(hi)) if scale == "log" else (lo, hi)
    if flip:
        t = thi - (g / extent) * (thi - tlo)
    else:
        t = tlo + (g / extent) * (thi - tlo)
    return np.power(10.0, t) if scale == "log" else t


def data_to_graphics_2d(view: ViewState, viewport: Viewport, x, y):
    """(gx, gy) arrays; NaN marks points a log axis cannot place."""
    gx = axis_to_graphics(x, *view.x, view.xscale, viewport.width, flip=False)
    gy = axis_to_graphics(y, *view.y, view.yscale, viewport.height, flip=True)
    return gx, gy


def graphics_to_data(view: ViewState, viewport: Viewport, gx, gy):
    """Exact inverse of the 2D mapping; cube views have no single-valued inverse."""
    if view.is_cube:
        raise UnsupportedError("graphics-to-data is undefined for cube plots")
    x = graphics_to_axis(gx, *view.x, view.xscale, viewport.width, flip=False)
    y = graphics_to_axis(gy, *view.y, view.yscale, viewport.height, flip=True)
    return x, y


def _normalize_cube(view: ViewState, x, y, z):
    """Center each axis and scale to [-1, 1] over its range."""
    out = []
    for vals, (lo, hi) in ((x, view.x), (y, view.y), (z, view.z)):
        mid = (lo + hi) / 2.0
        half = (hi - lo) / 2.0
        out.append((np.asarray(vals, dtype=np.float64) - mid) / half)
    return out


def data_to_graphics_3d(view: ViewState, viewport: Viewport, x, y, z):
    """(gx, gy, depth): rotate normalized coordinates, project orthographically.

    depth is the rotated z component; larger means nearer the viewer. At
    identity rotation gx/gy equal the 2D formulas.
    """
    ux, uy, uz = _normalize_cube(view, x, y, z)
    r = view.rotation
    px = r[0, 0] * ux + r[0, 1] * uy + r[0, 2] * uz
    py = r[1, 0] * ux + r[1, 1] * uy + r[1, 2] * uz
    pz = r[2, 0] * ux + r[2, 1] * uy + r[2, 2] * uz
    gx = viewport.width * (0.5 + px / 2.0)
    gy = viewport.height * (0.5 - py / 2.0)
    return gx, gy, pz


def data_to_graphics(view: ViewState, viewport: Viewport, point):
    """Single-point convenience wrapper; returns None where undefined (log of <= 0)."""
    if view.is_cube:
        x, y, z = point
        gx, gy, depth = data_to_graphics_3d(view, viewport, x, y, z)
        return float(gx), float(gy), float(depth)
    x, y = point
    gx, gy = data_to_graphics_2d(view, viewport, x, y)
    if math.isnan(float(gx)) or math.isnan(float(gy)):
        return None
    return float(gx), float(gy)


# ---------------------------------------------------------------------------
# auto-ranging


def padded_range(vmin: float, vmax: float, scale: str, pad: float) -> tuple[float, float]:
    """[min, max] padded by ``pad`` of the span per side (log: in log10 space).

    Degenerate spans widen to [v-1, v+1] (linear) or [v/10, v*10] (log).
    """
    if scale == "log":
        tlo, thi = math.log10(vmin), math.log10(vmax)
        if tlo == thi:
            return vmin / 10.0, vmax * 10.0
        span = thi - tlo
        return 10.0 ** (tlo - pad * span), 10.0 ** (thi + pad * span)
    if vmin == vmax:
        return vmin - 1.0, vmax + 1.0
    span = vmax - vmin
    return vmin - pad * span, vmax + pad * span


def fallback_range(scale: str) -> tuple[float, float]:
    """Axis range when no valid data exists: [0, 1], or [1, 10] on log axes."""
    return (1.0, 10.0) if scale == "log" else (0.0, 1.0)


# ---------------------------------------------------------------------------
# rotation helpers


def yaw_matrix(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def pitch_matrix(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def reorthonormalize(m: np.ndarray) -> np.ndarray:
    """Nearest rotation matrix (polar decomposition via SVD)."""
    u, _, vt = np.linalg.svd(m)
    r = u @ vt
    if np.linalg.det(r) < 0:
        u[:, -1] = -u[:, -1]
        r = u @ vt
    return r


# ---------------------------------------------------------------------------
# navigation


def _scaled_bounds(lo: float, hi: float, scale: str) -> tuple[float, float]:
    return (math.log10(lo), math.log10(hi)) if scale == "log" else (lo, hi)


def _axis_from_scaled(tlo: float, thi: float, scale: str) -> tuple[float, float]:
    if scale == "log":
        return 10.0**tlo, 10.0**thi
    return tlo, thi


def _pan_axis(lo, hi, scale, shift_frac):
    """Translate a range by shift_frac of its span (in log10 space on log axes)."""
    tlo, thi = _scaled_bounds(lo, hi, scale)
    d = shift_frac * (thi - tlo)
    return _axis_from_scaled(tlo + d, thi + d, scale)


def _zoom_axis(lo, hi, scale, anchor_frac, factor):
    """Scale a range by 1/factor about the point at anchor_frac of its span."""
    tlo, thi = _scaled_bounds(lo, hi, scale)
    a = tlo + anchor_frac * (thi - tlo)
    return _axis_from_scaled(a - (a - tlo) / factor, a + (thi - a) / factor, scale)


def apply_navigation(view: ViewState, action: NavAction, viewport: Viewport) -> ViewState:
    """Pan/zoom/rotate the view; pixel deltas refer to the given viewport."""
    if isinstance(action, Pan):
        if view.is_cube:
            return _pan_cube(view, action, viewport)
        # content moves by (dx, dy) px: x window shifts left, y window shifts up
        return replace(
            view,
            x=_pan_axis(*view.x, view.xscale, -action.dx / viewport.width),
            y=_pan_axis(*view.y, view.yscale, action.dy / viewport.height),
        )
    if isinstance(action, Zoom):
        f = action.factor
        if not (isinstance(f, (int, float)) and math.isfinite(f) and f > 0):
            raise RangeError(f"zoom factor must be positive, got {f}")
        if view.is_cube:
            # no unique data point under a pixel in 3D: zoom about range centers
            return replace(
                view,
                x=_zoom_axis(*view.x, "linear", 0.5, f),
                y=_zoom_axis(*view.y, "linear", 0.5, f),
                z=_zoom_axis(*view.z, "linear", 0.5, f),
            )
        return replace(
            view,
            x=_zoom_axis(*view.x, view.xscale, action.cx / viewport.width, f),
            y=_zoom_axis(*view.y, view.yscale, 1.0 - action.cy / viewport.height, f),
        )
    if isinstance(action, Rotate):
        if not view.is_cube:
            raise UnsupportedError("rotate applies only to cube plots")
        composed = yaw_matrix(action.yaw) @ pitch_matrix(action.pitch) @ view.rotation
        return replace(view, rotation=reorthonormalize(composed))
    raise UnsupportedError(f"unknown navigation action {action!r}")


def _pan_cube(view: ViewState, action: Pan, viewport: Viewport) -> ViewState:
    # screen-frame delta that moves content by (dx, dy) px, taken back to
    # data axes through the inverse rotation
    dview = np.array([2.0 * action.dx / viewport.width,
                      -2.0 * action.dy / viewport.height,
                      0.0])
    du = view.rotation.T @ dview
    new_ranges = []
    for (lo, hi), d in zip((view.x, view.y, view.z), du):
        shift = -d * (hi - lo) / 2.0
        new_ranges.append((lo + shift, hi + shift))
    return replace(view, x=new_ranges[0], y=new_ranges[1], z=new_ranges[2])
