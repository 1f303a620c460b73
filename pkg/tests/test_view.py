import math

import numpy as np
import pytest

from plotwire.errors import RangeError, UnsupportedError
from plotwire.view import (
    Pan, Rotate, ViewState, Viewport, Zoom, apply_navigation,
    data_to_graphics, data_to_graphics_2d, data_to_graphics_3d,
    graphics_to_data, padded_range, pitch_matrix, reorthonormalize,
    yaw_matrix,
)


def v2(x=(0.0, 10.0), y=(0.0, 10.0), xscale="linear", yscale="linear"):
    return ViewState(x=x, y=y, xscale=xscale, yscale=yscale)


def v3(x=(0.0, 10.0), y=(0.0, 10.0), z=(0.0, 10.0), rotation=None):
    return ViewState(x=x, y=y, z=z, rotation=rotation if rotation is not None else np.eye(3))


VP = Viewport(100, 80)


class TestViewStateInvariants:
    def test_lo_must_be_below_hi(self):
        with pytest.raises(RangeError):
            v2(x=(5.0, 5.0))

    def test_log_needs_positive_lo(self):
        with pytest.raises(RangeError):
            v2(x=(0.0, 10.0), xscale="log")

    def test_rotation_must_be_orthonormal(self):
        with pytest.raises(RangeError, match="orthonormal"):
            v3(rotation=np.eye(3) * 2.0)

    def test_reflection_rejected(self):
        m = np.diag([1.0, 1.0, -1.0])
        with pytest.raises(RangeError, match="determinant"):
            v3(rotation=m)

    def test_viewport_minimum(self):
        with pytest.raises(RangeError):
            Viewport(7, 100)


class TestTransforms:
    def test_linear_midpoint(self):
        gx, _ = data_to_graphics_2d(v2(), VP, 5.0, 0.0)
        assert float(gx) == 50.0

    def test_log_midpoint(self):
        view = v2(x=(1.0, 100.0), xscale="log")
        gx, _ = data_to_graphics_2d(view, VP, 10.0, 0.0)
        assert float(gx) == 50.0

    def test_y_is_flipped(self):
        _, gy = data_to_graphics_2d(v2(), VP, 0.0, 10.0)
        assert float(gy) == 0.0  # data top is graphics row 0
        _, gy = data_to_graphics_2d(v2(), VP, 0.0, 0.0)
        assert float(gy) == 80.0

    def test_log_of_nonpositive_is_outside(self):
        view = v2(x=(1.0, 100.0), xscale="log")
        assert data_to_graphics(view, VP, (-3.0, 5.0)) is None

    def test_edges_invert_exactly(self):
        view = v2(x=(2.0, 8.0))
        x, _ = graphics_to_data(view, VP, 0.0, 0.0)
        assert float(x) == 2.0
        x, _ = graphics_to_data(view, VP, 100.0, 0.0)
        assert float(x) == 8.0

    def test_log_edge_exact(self):
        view = v2(x=(1.0, 100.0), xscale="log")
        x, _ = graphics_to_data(view, VP, 100.0, 0.0)
        assert abs(float(x) - 100.0) <= 1e-12 * 100.0

    def test_graphics_to_data_rejects_cube(self):
        with pytest.raises(UnsupportedError):
            graphics_to_data(v3(), VP, 1.0, 1.0)

    def test_identity_rotation_matches_2d_formulas(self):
        view = v3(x=(0.0, 10.0), y=(-5.0, 5.0), z=(0.0, 1.0))
        gx3, gy3, depth = data_to_graphics_3d(view, VP, 10.0, 2.0, 0.5)
        gx2, gy2 = data_to_graphics_2d(v2(x=(0.0, 10.0), y=(-5.0, 5.0)), VP, 10.0, 2.0)
        assert float(gx3) == float(gx2) == 100.0  # range edge hits viewport edge
        assert float(gy3) == float(gy2)
        assert float(depth) == 0.0  # z at range midpoint

    def test_roundtrip_sweep_including_log(self, rng):
        for _ in range(1000):
            lox = rng.uniform(-100, 100)
            spanx = rng.uniform(1e-3, 50)
            xscale = "log" if rng.random() < 0.4 else "linear"
            yscale = "log" if rng.random() < 0.4 else "linear"
            x = (abs(lox) + 0.1, abs(lox) + 0.1 + spanx) if xscale == "log" else (lox, lox + spanx)
            loy = rng.uniform(-100, 100)
            spany = rng.uniform(1e-3, 50)
            y = (abs(loy) + 0.1, abs(loy) + 0.1 + spany) if yscale == "log" else (loy, loy + spany)
            view = v2(x=x, y=y, xscale=xscale, yscale=yscale)
            vp = Viewport(int(rng.integers(8, 2000)), int(rng.integers(8, 2000)))
            gx = rng.uniform(0, vp.width)
            gy = rng.uniform(0, vp.height)
            dx, dy = graphics_to_data(view, vp, gx, gy)
            gx2, gy2 = data_to_graphics_2d(view, vp, dx, dy)
            assert abs(float(gx2) - gx) <= 1e-9 * max(1.0, abs(gx))
            assert abs(float(gy2) - gy) <= 1e-9 * max(1.0, abs(gy))


class TestPaddedRange:
    def test_two_percent_pad(self):
        assert padded_range(0.0, 10.0, "linear", 0.02) == (-0.2, 10.2)

    def test_degenerate_linear(self):
        assert padded_range(5.0, 5.0, "linear", 0.02) == (4.0, 6.0)

    def test_degenerate_log(self):
        lo, hi = padded_range(5.0, 5.0, "log", 0.02)
        assert (lo, hi) == (0.5, 50.0)

    def test_log_pad_in_log_space(self):
        lo, hi = padded_range(1.0, 100.0, "log", 0.02)
        assert math.isclose(math.log10(lo), -0.04)
        assert math.isclose(math.log10(hi), 2.04)


class TestNavigation:
    def test_zoom_about_center_halves_span(self):
        view = apply_navigation(v2(), Zoom(2.0, 50.0, 40.0), VP)
        assert view.x == (2.5, 7.5)
        assert view.y == (2.5, 7.5)

    def test_zoom_about_left_edge(self):
        view = apply_navigation(v2(), Zoom(2.0, 0.0, 80.0), VP)
        assert view.x == (0.0, 5.0)
        assert view.y == (0.0, 5.0)  # gy=80 is data y=0, the bottom edge

    def test_zoom_rejects_nonpositive_factor(self):
        for bad in (0.0, -1.0, float("nan")):
            with pytest.raises(RangeError):
                apply_navigation(v2(), Zoom(bad, 0.0, 0.0), VP)

    def test_rotate_rejected_on_plane(self):
        with pytest.raises(UnsupportedError):
            apply_navigation(v2(), Rotate(0.1, 0.1), VP)

    def test_pan_identity(self):
        view = apply_navigation(v2(), Pan(0.0, 0.0), VP)
        assert view.x == (0.0, 10.0) and view.y == (0.0, 10.0)

    def test_pan_moves_content_with_drag(self):
        # drag right: content moves right, window moves left
        view = apply_navigation(v2(), Pan(10.0, 0.0), VP)
        assert view.x == (-1.0, 9.0)
        # drag down: content moves down, y window moves up
        view = apply_navigation(v2(), Pan(0.0, 8.0), VP)
        assert view.y == (1.0, 11.0)

    def test_zoom_unzoom_roundtrip_sweep(self, rng):
        for _ in range(1000):
            lo = rng.uniform(-50, 50)
            span = rng.uniform(0.01, 100)
            view = v2(x=(lo, lo + span), y=(lo / 2, lo / 2 + span))
            f = rng.uniform(1.1, 10)
            cx, cy = rng.uniform(0, 100), rng.uniform(0, 80)
            z1 = apply_navigation(view, Zoom(f, cx, cy), VP)
            z2 = apply_navigation(z1, Zoom(1 / f, cx, cy), VP)
            for (a, b), (c, d) in ((z2.x, view.x), (z2.y, view.y)):
                assert abs(a - c) <= 1e-9 * max(1.0, abs(c))
                assert abs(b - d) <= 1e-9 * max(1.0, abs(d))

    def test_zoom_anchor_preserved_sweep(self, rng):
        for _ in range(1000):
            lo = rng.uniform(-50, 50)
            span = rng.uniform(0.01, 100)
            xscale = "log" if rng.random() < 0.3 else "linear"
            x = (abs(lo) + 0.1, abs(lo) + 0.1 + span) if xscale == "log" else (lo, lo + span)
            view = v2(x=x, y=(0.0, 1.0), xscale=xscale)
            f = rng.uniform(0.2, 8.0)
            cx, cy = rng.uniform(0, 100), rng.uniform(0, 80)
            anchor = graphics_to_data(view, VP, cx, cy)
            zoomed = apply_navigation(view, Zoom(f, cx, cy), VP)
            gx2, gy2 = data_to_graphics_2d(zoomed, VP, anchor[0], anchor[1])
            assert abs(float(gx2) - cx) <= 0.5
            assert abs(float(gy2) - cy) <= 0.5

    def test_pan_composition_additive(self, rng):
        for _ in range(500):
            view = v2(x=(rng.uniform(-5, 5), rng.uniform(6, 15)),
                      y=(rng.uniform(-5, 5), rng.uniform(6, 15)))
            a = Pan(rng.uniform(-40, 40), rng.uniform(-40, 40))
            b = Pan(rng.uniform(-40, 40), rng.uniform(-40, 40))
            seq = apply_navigation(apply_navigation(view, a, VP), b, VP)
            once = apply_navigation(view, Pan(a.dx + b.dx, a.dy + b.dy), VP)
            for (p, q), (r, s) in ((seq.x, once.x), (seq.y, once.y)):
                assert abs(p - r) <= 1e-9 * max(1.0, abs(r))
                assert abs(q - s) <= 1e-9 * max(1.0, abs(s))

    def test_log_pan_shifts_in_log_space(self):
        view = v2(x=(1.0, 100.0), xscale="log")
        panned = apply_navigation(view, Pan(-50.0, 0.0), VP)  # drag left one decade
        assert math.isclose(panned.x[0], 10.0)
        assert math.isclose(panned.x[1], 1000.0)


class TestCubeNavigation:
    def test_rotate_composes_and_stays_orthonormal(self):
        view = v3()
        for _ in range(100):
            view = apply_navigation(view, Rotate(0.13, -0.07), VP)
        r = view.rotation
        assert np.abs(r.T @ r - np.eye(3)).max() < 1e-12

    def test_mass_rotation_orthonormality(self, rng):
        view = v3()
        for _ in range(10_000):
            view = apply_navigation(
                view, Rotate(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)), VP
            )
        r = view.rotation
        assert np.abs(r.T @ r - np.eye(3)).max() < 1e-9

    def test_cube_zoom_scales_all_axes_about_centers(self):
        view = apply_navigation(v3(), Zoom(2.0, 0.0, 0.0), VP)
        assert view.x == (2.5, 7.5) and view.y == (2.5, 7.5) and view.z == (2.5, 7.5)

    def test_cube_pan_at_identity_matches_plane_pan(self):
        view = apply_navigation(v3(), Pan(10.0, -8.0), VP)
        assert view.x == pytest.approx((-1.0, 9.0))
        assert view.y == pytest.approx((-1.0, 9.0))
        assert view.z == pytest.approx((0.0, 10.0))

    def test_cube_pan_moves_projected_points_by_pixel_delta(self, rng):
        rot = reorthonormalize(yaw_matrix(0.7) @ pitch_matrix(-0.4))
        view = v3(x=(-3.0, 5.0), y=(2.0, 12.0), z=(-1.0, 1.0), rotation=rot)
        point = (1.0, 7.0, 0.3)
        gx0, gy0, _ = data_to_graphics_3d(view, VP, *point)
        panned = apply_navigation(view, Pan(13.0, -6.0), VP)
        gx1, gy1, _ = data_to_graphics_3d(panned, VP, *point)
        assert float(gx1 - gx0) == pytest.approx(13.0, abs=1e-9)
        assert float(gy1 - gy0) == pytest.approx(-6.0, abs=1e-9)


def test_reorthonormalize_fixes_drift():
    m = yaw_matrix(0.3) @ pitch_matrix(0.2) + 1e-7
    r = reorthonormalize(m)
    assert np.abs(r.T @ r - np.eye(3)).max() < 1e-14
    assert np.linalg.det(r) == pytest.approx(1.0)
