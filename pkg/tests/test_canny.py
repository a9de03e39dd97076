import numpy as np
import pytest
from scipy import ndimage

from sketchbench.sketch import SketchRecipe, canny
from sketchbench.sketch.canny import (
    _hysteresis,
    _non_maximum_suppression,
    gaussian_blur,
    sobel_gradients,
)

from canny_oracle import oracle_canny

RECIPE = SketchRecipe()


def step_image(width=64, height=64, boundary=32):
    img = np.zeros((height, width), dtype=np.uint8)
    img[:, boundary:] = 255
    return img


def square_image(size=64, square=20):
    img = np.zeros((size, size), dtype=np.uint8)
    lo = (size - square) // 2
    img[lo : lo + square, lo : lo + square] = 255
    return img


def edge_sets_agree_within_one_px(a: np.ndarray, b: np.ndarray) -> bool:
    """Symmetric check: every edge pixel of one map is within Chebyshev
    distance 1 of an edge pixel of the other."""
    struct = np.ones((3, 3), dtype=bool)
    a_mask = a > 0
    b_mask = b > 0
    if not a_mask.any() and not b_mask.any():
        return True
    a_dilated = ndimage.binary_dilation(a_mask, structure=struct)
    b_dilated = ndimage.binary_dilation(b_mask, structure=struct)
    return bool((a_mask <= b_dilated).all() and (b_mask <= a_dilated).all())


class TestCannyFixtures:
    def test_constant_image_has_no_edges(self):
        for level in (0, 127, 255):
            img = np.full((32, 32), level, dtype=np.uint8)
            assert canny(img, RECIPE).sum() == 0

    def test_vertical_step_edges_hug_the_boundary(self):
        img = step_image(boundary=32)
        edges = canny(img, RECIPE)
        rows, cols = np.nonzero(edges)
        assert len(cols) > 0
        # the step sits between columns 31 and 32
        assert np.all(np.abs(cols - 31.5) <= 1.0)
        oracle = oracle_canny(img, RECIPE)
        orows, ocols = np.nonzero(oracle)
        assert np.all(np.abs(ocols - 31.5) <= 1.0)
        assert edge_sets_agree_within_one_px(edges, oracle)

    def test_step_edge_is_a_thin_line(self):
        edges = canny(step_image(), RECIPE)
        # at most one surviving pixel per row on a clean symmetric step
        per_row = (edges > 0).sum(axis=1)
        assert per_row[2:-2].max() <= 2

    def test_square_produces_closed_contour(self):
        img = square_image()
        edges = canny(img, RECIPE)
        assert edges.any()

        # (a) every edge pixel within 1 px of the square boundary
        lo, hi = 22, 42  # square occupies [22, 42)
        rows, cols = np.nonzero(edges)
        on_boundary_band = (
            (np.abs(rows - (lo - 0.5)) <= 1.5)
            | (np.abs(rows - (hi - 0.5)) <= 1.5)
            | (np.abs(cols - (lo - 0.5)) <= 1.5)
            | (np.abs(cols - (hi - 0.5)) <= 1.5)
        )
        near_square = (rows >= lo - 2) & (rows < hi + 2) & (cols >= lo - 2) & (cols < hi + 2)
        assert np.all(on_boundary_band & near_square)

        # (b) contour is one 8-connected component
        _, count = ndimage.label(edges > 0, structure=np.ones((3, 3), dtype=bool))
        assert count == 1

        # (c) contour encloses the center: a 4-connected background flood
        # (the dual of 8-connected edges) from the border never reaches
        # the middle
        free = edges == 0
        labels, _ = ndimage.label(free)
        assert labels[0, 0] != labels[32, 32]

        assert edge_sets_agree_within_one_px(edges, oracle_canny(img, RECIPE))

    def test_output_is_binary(self):
        edges = canny(square_image(), RECIPE)
        assert set(np.unique(edges)) <= {0, 255}

    def test_too_small_image_rejected(self):
        with pytest.raises(ValueError):
            canny(np.zeros((8, 8), dtype=np.uint8), RECIPE)


class TestCannyProperties:
    def test_translation_equivariance_in_interior(self):
        rng = np.random.default_rng(0)
        patch = (rng.uniform(0, 255, size=(12, 12))).astype(np.uint8)
        base = np.zeros((80, 80), dtype=np.uint8)
        a = base.copy()
        a[20:32, 20:32] = patch
        b = base.copy()
        b[29:41, 25:37] = patch  # shifted by (9, 5)
        ea = canny(a, RECIPE)
        eb = canny(b, RECIPE)
        assert (ea[10:44, 10:44] == eb[19:53, 15:49]).all()

    def test_hysteresis_keeps_only_strong_connected_weak_pixels(self):
        img = square_image()
        blurred = gaussian_blur(img, RECIPE.gaussian_sigma)
        gx, gy = sobel_gradients(blurred)
        suppressed = _non_maximum_suppression(np.hypot(gx, gy), gx, gy)
        edges = _hysteresis(suppressed, RECIPE.canny_low, RECIPE.canny_high)

        # recompute membership by flooding from strong pixels
        from canny_oracle import oracle_hysteresis

        expected = oracle_hysteresis(suppressed, RECIPE.canny_low, RECIPE.canny_high)
        assert (edges == expected).all()

    def test_weak_only_region_dropped(self):
        # a gentle ramp yields magnitudes between low and high, so with no
        # strong seed anywhere hysteresis drops everything
        ramp = np.tile(np.arange(64, dtype=np.uint8) * 2, (64, 1))
        recipe = SketchRecipe(canny_low=5.0, canny_high=250.0)
        edges = canny(ramp, recipe)
        assert edges.sum() == 0
