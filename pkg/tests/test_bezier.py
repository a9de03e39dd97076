import math

import numpy as np
import pytest

from sketchbench.geometry import Rect
from sketchbench.sketch import ControlPolygon, SketchRecipe, bezier_point, squiggle
from sketchbench.sketch.bezier import line_layout, stroke_width


def bernstein_point(points, t):
    """Bernstein-form evaluation; the independent check for De Casteljau."""
    n = len(points) - 1
    x = y = 0.0
    for i, (px, py) in enumerate(points):
        coeff = math.comb(n, i) * (1 - t) ** (n - i) * t**i
        x += coeff * px
        y += coeff * py
    return x, y


class TestBezierPoint:
    def test_linear_interpolation(self):
        poly = ControlPolygon(((0, 0), (2, 2)))
        assert bezier_point(poly, 0.25) == (0.5, 0.5)

    def test_cubic_midpoint(self):
        poly = ControlPolygon(((0, 0), (0, 1), (1, 1), (1, 0)))
        assert bezier_point(poly, 0.5) == (0.5, 0.75)

    def test_endpoints_exact(self):
        poly = ControlPolygon(((3, 4), (9, -2), (5, 5), (7, 1), (0, 0)))
        assert bezier_point(poly, 0.0) == (3.0, 4.0)
        assert bezier_point(poly, 1.0) == (0.0, 0.0)

    def test_t_out_of_range_rejected(self):
        poly = ControlPolygon(((0, 0), (1, 1)))
        with pytest.raises(ValueError):
            bezier_point(poly, -0.01)
        with pytest.raises(ValueError):
            bezier_point(poly, 1.01)

    def test_single_point_polygon_rejected(self):
        with pytest.raises(ValueError):
            ControlPolygon(((0, 0),))

    def test_agrees_with_bernstein_form(self):
        rng = np.random.default_rng(42)
        for _ in range(300):
            degree = int(rng.integers(1, 7))
            pts = tuple((float(x), float(y)) for x, y in rng.uniform(-10, 10, size=(degree + 1, 2)))
            poly = ControlPolygon(pts)
            t = float(rng.uniform(0, 1))
            got = bezier_point(poly, t)
            want = bernstein_point(pts, t)
            assert got[0] == pytest.approx(want[0], abs=1e-12)
            assert got[1] == pytest.approx(want[1], abs=1e-12)


class TestSquiggle:
    def test_wave_parameters_for_16px_line(self):
        recipe = SketchRecipe()
        box = Rect(0, 0, 200, 16)
        n_lines, h = line_layout(box)
        assert n_lines == 1 and h == 16
        assert recipe.wavelength_factor * h == 32
        assert recipe.amplitude_factor * h == pytest.approx(5.6)
        assert stroke_width(h, recipe) == 1

        polys = squiggle(box, recipe, np.random.default_rng(0))
        # half period of 16 px across a 200 px box gives 12 segments
        assert len(polys) == 12
        assert polys[0].points[0] == (0, 8)

    def test_zero_jitter_is_seed_independent(self):
        recipe = SketchRecipe(jitter_fraction=0.0)
        box = Rect(5, 5, 105, 25)
        a = squiggle(box, recipe, np.random.default_rng(1))
        b = squiggle(box, recipe, np.random.default_rng(999))
        assert a == b

    def test_same_seed_reproduces(self):
        recipe = SketchRecipe()
        box = Rect(5, 5, 105, 25)
        a = squiggle(box, recipe, np.random.default_rng(7))
        b = squiggle(box, recipe, np.random.default_rng(7))
        assert a == b

    def test_points_stay_inside_box(self):
        recipe = SketchRecipe()
        rng = np.random.default_rng(3)
        for _ in range(100):
            x0, y0 = rng.uniform(0, 500, size=2)
            w, h = rng.uniform(1, 400, size=2)
            box = Rect(float(x0), float(y0), float(x0 + w), float(y0 + h))
            for poly in squiggle(box, recipe, rng):
                for x, y in poly.points:
                    assert box.x0 <= x <= box.x1
                    assert box.y0 <= y <= box.y1

    def test_narrow_box_degrades_to_straight_line(self):
        recipe = SketchRecipe()
        box = Rect(0, 0, 4, 16)  # half period is 16 px, box only 4 px wide
        polys = squiggle(box, recipe, np.random.default_rng(0))
        assert len(polys) == 1
        assert polys[0].points == ((0, 8), (4, 8))

    def test_multi_line_boxes_split_on_body_line_height(self):
        n_lines, h = line_layout(Rect(0, 0, 100, 54))
        assert n_lines == 3
        assert h == 18
