"""The full screenshot-to-sketch pipeline.

Order of operations: text and image regions are masked to the local
background, Canny runs on the remainder, squiggle strokes are composited
into the text boxes, and each image box is drawn as a rectangle with a
diagonal cross.  Image boxes take priority where boxes overlap.

The output uses the edge-map convention (strokes 255 on black); pass
``invert=True`` to :func:`~sketchbench.sketch.raster.save_gray_png` to
get the black-on-white drawing style.
"""

from __future__ import annotations

import numpy as np
from PIL import Image, ImageDraw

from ..geometry import Rect
from .bezier import bezier_point, line_layout, squiggle, stroke_width
from .canny import canny
from .recipe import SketchRecipe

__all__ = ["synthesize"]

IMAGE_STROKE_WIDTH = 2
_CURVE_SAMPLES_MIN = 8


def _pixel_bounds(box: Rect, shape: tuple[int, int]) -> tuple[int, int, int, int]:
    h, w = shape
    x0 = max(0, int(np.floor(box.x0)))
    y0 = max(0, int(np.floor(box.y0)))
    x1 = min(w, int(np.ceil(box.x1)))
    y1 = min(h, int(np.ceil(box.y1)))
    return x0, y0, x1, y1


def _mask_to_background(img: np.ndarray, box: Rect) -> None:
    """Fill a box with the median of the ring just outside it."""
    x0, y0, x1, y1 = _pixel_bounds(box, img.shape)
    if x1 <= x0 or y1 <= y0:
        return
    rx0, ry0 = max(0, x0 - 2), max(0, y0 - 2)
    rx1, ry1 = min(img.shape[1], x1 + 2), min(img.shape[0], y1 + 2)
    ring = np.ones((ry1 - ry0, rx1 - rx0), dtype=bool)
    ring[y0 - ry0 : y1 - ry0, x0 - rx0 : x1 - rx0] = False
    surround = img[ry0:ry1, rx0:rx1][ring]
    fill = int(np.median(surround)) if surround.size else 255
    img[y0:y1, x0:x1] = fill


def _draw_squiggles(
    draw: ImageDraw.ImageDraw,
    box: Rect,
    recipe: SketchRecipe,
    rng: np.random.Generator,
) -> None:
    _, h = line_layout(box)
    width = stroke_width(h, recipe)
    for poly in squiggle(box, recipe, rng):
        span = max(abs(poly.points[-1][0] - poly.points[0][0]), 1.0)
        samples = max(_CURVE_SAMPLES_MIN, int(span))
        pts = [bezier_point(poly, i / samples) for i in range(samples + 1)]
        draw.line(pts, fill=255, width=width, joint="curve")


def _draw_image_placeholder(draw: ImageDraw.ImageDraw, box: Rect) -> None:
    x0, y0, x1, y1 = box.x0, box.y0, box.x1 - 1, box.y1 - 1
    if x1 <= x0 or y1 <= y0:
        return
    draw.rectangle([x0, y0, x1, y1], outline=255, width=IMAGE_STROKE_WIDTH)
    draw.line([x0, y0, x1, y1], fill=255, width=IMAGE_STROKE_WIDTH)
    draw.line([x0, y1, x1, y0], fill=255, width=IMAGE_STROKE_WIDTH)


def synthesize(
    screenshot: np.ndarray,
    text_boxes: list[Rect],
    image_boxes: list[Rect],
    recipe: SketchRecipe,
) -> np.ndarray:
    """Build a binary wireframe sketch from a grayscale screenshot."""
    if screenshot.ndim != 2:
        raise ValueError("synthesize expects a grayscale screenshot")
    masked = screenshot.astype(np.uint8).copy()
    for box in list(text_boxes) + list(image_boxes):
        _mask_to_background(masked, box)

    edges = canny(masked, recipe)

    # squiggles live on their own layer so image boxes can erase them,
    # including the rasterized stroke overhang, without touching edges
    squiggle_layer = Image.new("L", (edges.shape[1], edges.shape[0]), 0)
    squiggle_draw = ImageDraw.Draw(squiggle_layer)
    rng = np.random.default_rng(np.random.PCG64(recipe.seed))
    max_stroke = 0
    for box in text_boxes:
        if box.is_degenerate():
            continue
        _, h = line_layout(box)
        max_stroke = max(max_stroke, stroke_width(h, recipe))
        _draw_squiggles(squiggle_draw, box, recipe, rng)

    pad = max_stroke + 1
    for box in image_boxes:
        x0, y0, x1, y1 = _pixel_bounds(box, edges.shape)
        if x1 > x0 and y1 > y0:
            squiggle_draw.rectangle([x0 - pad, y0 - pad, x1 - 1 + pad, y1 - 1 + pad], fill=0)

    canvas = Image.fromarray(np.maximum(edges, np.asarray(squiggle_layer)), "L")
    draw = ImageDraw.Draw(canvas)
    for box in image_boxes:
        x0, y0, x1, y1 = _pixel_bounds(box, edges.shape)
        if x1 > x0 and y1 > y0:
            draw.rectangle([x0, y0, x1 - 1, y1 - 1], fill=0)
    for box in image_boxes:
        if not box.is_degenerate():
            _draw_image_placeholder(draw, box)

    out = np.asarray(canvas, dtype=np.uint8)
    return np.where(out >= 128, 255, 0).astype(np.uint8)
