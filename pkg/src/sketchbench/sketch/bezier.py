"""Bezier evaluation and squiggly text-line generation.

Text boxes in a wireframe sketch are filled with hand-drawn-looking
waves: one sinusoid per text line, each half-period approximated by a
cubic Bezier whose inner control points are jittered by the seeded
generator.  All emitted control points are clamped into their box, so by
the convex-hull property the drawn curves never leave it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..geometry import Rect
from .recipe import BODY_LINE_HEIGHT_PX, SketchRecipe

__all__ = ["ControlPolygon", "bezier_point", "squiggle", "line_layout", "stroke_width"]

# Cubic with inner control points at 4/3 of the target height has its
# midpoint exactly at the target: (3*(4/3)A + 3*(4/3)A) / 8 = A.
_SINE_BULGE = 4.0 / 3.0


@dataclass(frozen=True)
class ControlPolygon:
    """Ordered Bezier control points; degree = len(points) - 1."""

    points: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        if len(self.points) < 2:
            raise ValueError("a control polygon needs at least two points")


def bezier_point(poly: ControlPolygon, t: float) -> tuple[float, float]:
    """Evaluate the curve at ``t`` in [0, 1] by De Casteljau recursion.

    Repeated linear interpolation of adjacent control points; equal to
    the Bernstein-form polynomial.
    """
    if not (0.0 <= t <= 1.0):
        raise ValueError(f"t must be within [0, 1], got {t}")
    pts = [(float(x), float(y)) for x, y in poly.points]
    while len(pts) > 1:
        pts = [
            ((1.0 - t) * x0 + t * x1, (1.0 - t) * y0 + t * y1)
            for (x0, y0), (x1, y1) in zip(pts, pts[1:])
        ]
    return pts[0]


def _round_half_up(x: float) -> int:
    return int(np.floor(x + 0.5))


def line_layout(box: Rect) -> tuple[int, float]:
    """(number of text lines, line height) for a text box."""
    n_lines = max(1, _round_half_up(box.height / BODY_LINE_HEIGHT_PX))
    return n_lines, box.height / n_lines


def stroke_width(line_height: float, recipe: SketchRecipe) -> int:
    return max(1, _round_half_up(line_height / recipe.stroke_divisor))


def squiggle(
    box: Rect,
    recipe: SketchRecipe,
    rng: np.random.Generator,
) -> list[ControlPolygon]:
    """Wave control polygons filling ``box``, one chain per text line.

    Each half-period is one cubic segment with wavelength
    ``wavelength_factor * line_height`` and amplitude
    ``amplitude_factor * line_height``; inner control points get uniform
    jitter of up to ``jitter_fraction * amplitude`` in each coordinate.
    A box too narrow for a single half-period degrades to a straight
    mid-line stroke.
    """
    if box.is_degenerate():
        raise ValueError("squiggle box must have nonzero area")
    n_lines, h = line_layout(box)
    wavelength = recipe.wavelength_factor * h
    amplitude = recipe.amplitude_factor * h
    half = wavelength / 2.0
    jitter_span = recipe.jitter_fraction * amplitude

    def clamp(x: float, y: float) -> tuple[float, float]:
        return (
            min(max(x, box.x0), box.x1),
            min(max(y, box.y0), box.y1),
        )

    polys: list[ControlPolygon] = []
    for i in range(n_lines):
        mid_y = box.y0 + (i + 0.5) * h
        n_seg = int(box.width // half) if half > 0 else 0
        if n_seg == 0:
            polys.append(ControlPolygon((clamp(box.x0, mid_y), clamp(box.x1, mid_y))))
            continue
        x = box.x0
        sign = 1.0
        for _ in range(n_seg):
            x_end = x + half
            bulge_y = mid_y - sign * amplitude * _SINE_BULGE
            inner = []
            for frac in (1.0 / 3.0, 2.0 / 3.0):
                px = x + frac * half
                py = bulge_y
                if jitter_span > 0.0:
                    px += float(rng.uniform(-jitter_span, jitter_span))
                    py += float(rng.uniform(-jitter_span, jitter_span))
                inner.append(clamp(px, py))
            polys.append(
                ControlPolygon(
                    (clamp(x, mid_y), inner[0], inner[1], clamp(x_end, mid_y))
                )
            )
            x = x_end
            sign = -sign
    return polys
