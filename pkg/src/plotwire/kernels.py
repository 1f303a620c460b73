"""Per-point rasterization loops: binning, marker painting, nearest-point scan.

Every kernel exists twice: a numba @njit build and a pure-numpy fallback.
The public names bind to the numba build when numba imports cleanly and the
PLOTWIRE_DISABLE_NUMBA environment variable is unset/empty; both paths use
the same arithmetic in the same order, so their outputs are bit-identical
(asserted by tests). Inputs are pre-transformed graphics coordinates; only
+,-,*,/ and round-half-even happen here.

Pixel convention: graphics coordinate g lands on pixel index
round-half-even(g - 0.5); indices outside the viewport are dropped.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False

USING_NUMBA = _HAVE_NUMBA and not os.environ.get("PLOTWIRE_DISABLE_NUMBA")


def _grid_shape(width: int, height: int, binpx: int) -> tuple[int, int]:
    return (height + binpx - 1) // binpx, (width + binpx - 1) // binpx


# ---------------------------------------------------------------------------
# pure-numpy implementations


def density_grid_numpy(gx, gy, width, height, binpx):
    """Counts of points per binpx x binpx pixel block; int64[ny, nx]."""
    ny, nx = _grid_shape(width, height, binpx)
    px = np.rint(gx - 0.5)
    py = np.rint(gy - 0.5)
    ok = (px >= 0) & (px < width) & (py >= 0) & (py < height)
    bx = px[ok].astype(np.int64) // binpx
    by = py[ok].astype(np.int64) // binpx
    flat = np.bincount(by * nx + bx, minlength=ny * nx)
    return flat.reshape(ny, nx).astype(np.int64)


def paint_mask_numpy(gx, gy, size, width, height):
    """Coverage mask of size x size squares; uint8[h, w]."""
    mask = np.zeros((height, width), dtype=np.uint8)
    px = np.rint(gx - 0.5)
    py = np.rint(gy - 0.5)
    ok = (px >= 0) & (px < width) & (py >= 0) & (py < height)
    px = px[ok].astype(np.int64)
    py = py[ok].astype(np.int64)
    for dy in range(-((size - 1) // 2), size // 2 + 1):
        yy = py + dy
        okY = (yy >= 0) & (yy < height)
        for dx in range(-((size - 1) // 2), size // 2 + 1):
            xx = px + dx
            sel = okY & (xx >= 0) & (xx < width)
            mask[yy[sel], xx[sel]] = 1
    return mask


def paint_shaded_numpy(gx, gy, shade, order, size, width, height):
    """Paint per-point shades in ``order`` (later entries win); int16[h, w], -1 empty.

    A pixel's final value under sequential point-major painting is the shade
    of the highest-ranked covering point, so scatter-max over paint ranks
    reproduces the loop exactly.
    """
    gxo = gx[order]
    gyo = gy[order]
    px = np.rint(gxo - 0.5)
    py = np.rint(gyo - 0.5)
    ok = (px >= 0) & (px < width) & (py >= 0) & (py < height)
    pxo = px[ok].astype(np.int64)
    pyo = py[ok].astype(np.int64)
    ranks = np.nonzero(ok)[0]
    rank_img = np.full((height, width), -1, dtype=np.int64)
    for dy in range(-((size - 1) // 2), size // 2 + 1):
        for dx in range(-((size - 1) // 2), size // 2 + 1):
            yy = pyo + dy
            xx = pxo + dx
            sel = (yy >= 0) & (yy < height) & (xx >= 0) & (xx < width)
            np.maximum.at(rank_img, (yy[sel], xx[sel]), ranks[sel])
    img = np.full((height, width), -1, dtype=np.int16)
    covered = rank_img >= 0
    img[covered] = shade[order][rank_img[covered]].astype(np.int16)
    return img


def hist_counts_numpy(tnorm, nbins):
    """Counts over nbins equal bins of t in [0, 1]; t == 1 joins the last bin."""
    ok = (tnorm >= 0.0) & (tnorm <= 1.0)
    b = np.floor(tnorm[ok] * nbins).astype(np.int64)
    b[b == nbins] = nbins - 1
    return np.bincount(b, minlength=nbins).astype(np.int64)


def nearest_point_numpy(gx, gy, cx, cy, radius, width, height):
    """Index of the in-viewport point nearest (cx, cy) within radius.

    Ties on squared distance resolve to the lowest index. Returns (-1, 0.0)
    when nothing is in range.
    """
    px = np.rint(gx - 0.5)
    py = np.rint(gy - 0.5)
    dx = gx - cx
    dy = gy - cy
    d2 = dx * dx + dy * dy
    ok = (
        (px >= 0) & (px < width) & (py >= 0) & (py < height)
        & (d2 <= radius * radius)
    )
    if not ok.any():
        return -1, 0.0
    d2m = np.where(ok, d2, np.inf)
    idx = int(np.argmin(d2m))  # argmin takes the first minimum: lowest index
    return idx, float(d2[idx])


def nearest_point_depth_numpy(gx, gy, depth, cx, cy, radius, width, height):
    """Like nearest_point, but distance ties prefer larger depth, then lowest index."""
    px = np.rint(gx - 0.5)
    py = np.rint(gy - 0.5)
    dx = gx - cx
    dy = gy - cy
    d2 = dx * dx + dy * dy
    ok = (
        (px >= 0) & (px < width) & (py >= 0) & (py < height)
        & (d2 <= radius * radius)
    )
    if not ok.any():
        return -1, 0.0
    d2m = np.where(ok, d2, np.inf)
    best = d2m.min()
    tied = d2m == best
    depth_t = np.where(tied, depth, -np.inf)
    idx = int(np.argmax(depth_t))  # argmax takes the first maximum: lowest index
    return idx, float(d2[idx])


# ---------------------------------------------------------------------------
# numba builds (same arithmetic, explicit loops)

if _HAVE_NUMBA:

    @njit(cache=True)
    def _density_grid_jit(gx, gy, width, height, binpx, grid):
        for i in range(gx.shape[0]):
            px = np.rint(gx[i] - 0.5)
            py = np.rint(gy[i] - 0.5)
            if 0.0 <= px < width and 0.0 <= py < height:
                grid[int(py) // binpx, int(px) // binpx] += 1

    def density_grid_numba(gx, gy, width, height, binpx):
        grid = np.zeros(_grid_shape(width, height, binpx), dtype=np.int64)
        _density_grid_jit(gx, gy, float(width), float(height), binpx, grid)
        return grid

    @njit(cache=True)
    def _paint_mask_jit(gx, gy, lo, hi, width, height, mask):
        for i in range(gx.shape[0]):
            px = np.rint(gx[i] - 0.5)
            py = np.rint(gy[i] - 0.5)
            if 0.0 <= px < width and 0.0 <= py < height:
                x = int(px)
                y = int(py)
                for dy in range(lo, hi + 1):
                    yy = y + dy
                    if 0 <= yy < mask.shape[0]:
                        for dx in range(lo, hi + 1):
                            xx = x + dx
                            if 0 <= xx < mask.shape[1]:
                                mask[yy, xx] = 1

    def paint_mask_numba(gx, gy, size, width, height):
        mask = np.zeros((height, width), dtype=np.uint8)
        _paint_mask_jit(
            gx, gy, -((size - 1) // 2), size // 2, float(width), float(height), mask
        )
        return mask

    @njit(cache=True)
    def _paint_shaded_jit(gx, gy, shade, order, lo, hi, width, height, img):
        for k in range(order.shape[0]):
            i = order[k]
            px = np.rint(gx[i] - 0.5)
            py = np.rint(gy[i] - 0.5)
            if 0.0 <= px < width and 0.0 <= py < height:
                x = int(px)
                y = int(py)
                s = np.int16(shade[i])
                for dy in range(lo, hi + 1):
                    yy = y + dy
                    if 0 <= yy < img.shape[0]:
                        for dx in range(lo, hi + 1):
                            xx = x + dx
                            if 0 <= xx < img.shape[1]:
                                img[yy, xx] = s

    def paint_shaded_numba(gx, gy, shade, order, size, width, height):
        img = np.full((height, width), -1, dtype=np.int16)
        _paint_shaded_jit(
            gx, gy, shade, order,
            -((size - 1) // 2), size // 2, float(width), float(height), img,
        )
        return img

    @njit(cache=True)
    def _hist_counts_jit(tnorm, nbins, counts):
        for i in range(tnorm.shape[0]):
            t = tnorm[i]
            if 0.0 <= t <= 1.0:
                b = int(np.floor(t * nbins))
                if b == nbins:
                    b = nbins - 1
                counts[b] += 1

    def hist_counts_numba(tnorm, nbins):
        counts = np.zeros(nbins, dtype=np.int64)
        _hist_counts_jit(tnorm, nbins, counts)
        return counts

    @njit(cache=True)
    def _nearest_point_jit(gx, gy, cx, cy, radius, width, height):
        best = np.int64(-1)
        best_d2 = np.inf
        r2 = radius * radius
        for i in range(gx.shape[0]):
            px = np.rint(gx[i] - 0.5)
            py = np.rint(gy[i] - 0.5)
            if not (0.0 <= px < width and 0.0 <= py < height):
                continue
            dx = gx[i] - cx
            dy = gy[i] - cy
            d2 = dx * dx + dy * dy
            if d2 <= r2 and d2 < best_d2:
                best = i
                best_d2 = d2
        if best < 0:
            return np.int64(-1), 0.0
        return best, best_d2

    def nearest_point_numba(gx, gy, cx, cy, radius, width, height):
        idx, d2 = _nearest_point_jit(
            gx, gy, float(cx), float(cy), float(radius), float(width), float(height)
        )
        return int(idx), float(d2)

    @njit(cache=True)
    def _nearest_point_depth_jit(gx, gy, depth, cx, cy, radius, width, height):
        best = np.int64(-1)
        best_d2 = np.inf
        best_depth = -np.inf
        r2 = radius * radius
        for i in range(gx.shape[0]):
            px = np.rint(gx[i] - 0.5)
            py = np.rint(gy[i] - 0.5)
            if not (0.0 <= px < width and 0.0 <= py < height):
                continue
            dx = gx[i] - cx
            dy = gy[i] - cy
            d2 = dx * dx + dy * dy
            if d2 > r2:
                continue
            if d2 < best_d2 or (d2 == best_d2 and depth[i] > best_depth):
                best = i
                best_d2 = d2
                best_depth = depth[i]
        if best < 0:
            return np.int64(-1), 0.0
        return best, best_d2

    def nearest_point_depth_numba(gx, gy, depth, cx, cy, radius, width, height):
        idx, d2 = _nearest_point_depth_jit(
            gx, gy, depth, float(cx), float(cy), float(radius),
            float(width), float(height),
        )
        return int(idx), float(d2)


if USING_NUMBA:
    density_grid = density_grid_numba
    paint_mask = paint_mask_numba
    paint_shaded = paint_shaded_numba
    hist_counts = hist_counts_numba
    nearest_point = nearest_point_numba
    nearest_point_depth = nearest_point_depth_numba
else:
    density_grid = density_grid_numpy
    paint_mask = paint_mask_numpy
    paint_shaded = paint_shaded_numpy
    hist_counts = hist_counts_numpy
    nearest_point = nearest_point_numpy
    nearest_point_depth = nearest_point_depth_numpy
