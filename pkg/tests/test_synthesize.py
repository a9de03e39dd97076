import io

import numpy as np
import pytest
from PIL import Image

from sketchbench.geometry import Rect
from sketchbench.sketch import SketchRecipe, canny, save_gray_png, synthesize, to_grayscale

RECIPE = SketchRecipe(seed=1234)


def page_screenshot():
    """A gray page with a darker panel so canny has something to find."""
    img = np.full((120, 160), 230, dtype=np.uint8)
    img[80:110, 20:140] = 60
    return img


def png_bytes(img: np.ndarray) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(img, "L").save(buf, format="PNG")
    return buf.getvalue()


class TestSynthesize:
    def test_no_boxes_reduces_to_canny(self):
        img = page_screenshot()
        assert (synthesize(img, [], [], RECIPE) == canny(img, RECIPE)).all()

    def test_image_box_draws_cross_on_flat_page(self):
        img = np.full((100, 100), 200, dtype=np.uint8)
        box = Rect(20, 20, 80, 80)
        out = synthesize(img, [], [box], RECIPE)

        ys, xs = np.nonzero(out)
        assert len(xs) > 0
        # nothing outside the box region
        assert xs.min() >= 19 and xs.max() <= 80
        assert ys.min() >= 19 and ys.max() <= 80
        # border strokes on all four sides and the diagonal crossing
        assert out[21, 50] == 255 and out[78, 50] == 255
        assert out[50, 21] == 255 and out[50, 78] == 255
        assert out[50, 50] == 255
        # quadrant interior away from border and diagonals stays empty
        assert out[35, 62] == 0 and out[62, 35] == 0

    def test_text_box_gets_squiggles(self):
        img = np.full((100, 200), 220, dtype=np.uint8)
        box = Rect(10, 10, 190, 46)
        out = synthesize(img, [box], [], RECIPE)
        region = out[10:46, 10:190]
        assert region.sum() > 0
        outside = out.copy()
        outside[8:48, 8:192] = 0
        assert outside.sum() == 0

    def test_deterministic_byte_identical_png(self, tmp_path):
        img = page_screenshot()
        text = [Rect(10, 10, 150, 40)]
        images = [Rect(30, 50, 90, 75)]
        a = synthesize(img, text, images, RECIPE)
        b = synthesize(img, text, images, RECIPE)
        assert png_bytes(a) == png_bytes(b)
        pa = tmp_path / "a.png"
        pb = tmp_path / "b.png"
        save_gray_png(a, pa)
        save_gray_png(b, pb)
        assert pa.read_bytes() == pb.read_bytes()

    def test_different_seed_changes_squiggles(self):
        img = np.full((100, 200), 220, dtype=np.uint8)
        text = [Rect(10, 10, 190, 46)]
        a = synthesize(img, text, [], SketchRecipe(seed=1))
        b = synthesize(img, text, [], SketchRecipe(seed=2))
        assert (a != b).any()

    def test_image_box_priority_over_text(self):
        img = np.full((100, 100), 210, dtype=np.uint8)
        box = Rect(20, 20, 80, 80)
        overlapping_text = [Rect(20, 20, 80, 80)]
        with_text = synthesize(img, overlapping_text, [box], RECIPE)
        without_text = synthesize(img, [], [box], RECIPE)
        assert (with_text == without_text).all()

    def test_output_is_binary(self):
        img = page_screenshot()
        out = synthesize(img, [Rect(10, 10, 100, 30)], [Rect(20, 60, 60, 100)], RECIPE)
        assert set(np.unique(out)) <= {0, 255}

    def test_rgb_input_rejected(self):
        rgb = np.zeros((50, 50, 3), dtype=np.uint8)
        with pytest.raises(ValueError):
            synthesize(rgb, [], [], RECIPE)


class TestGrayscale:
    def test_rgb_conversion_matches_pil(self):
        rgb = np.zeros((4, 4, 3), dtype=np.uint8)
        rgb[..., 2] = 255  # pure blue
        gray = to_grayscale(rgb)
        assert gray.shape == (4, 4)
        assert int(gray[0, 0]) == 29  # ITU-R 601 blue luma
