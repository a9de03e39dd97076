"""Shared random-rectangle generators for the geometry test suites."""

from __future__ import annotations

import numpy as np

from sketchbench.geometry import Rect


def random_rects(
    rng: np.random.Generator,
    n: int,
    max_coord: float = 2000.0,
    integer: bool = False,
) -> list[Rect]:
    """Draw ``n`` non-degenerate rects with coordinates in [0, max_coord]."""
    rects = []
    while len(rects) < n:
        if integer:
            xs = rng.integers(0, int(max_coord) + 1, size=2)
            ys = rng.integers(0, int(max_coord) + 1, size=2)
        else:
            xs = rng.uniform(0.0, max_coord, size=2)
            ys = rng.uniform(0.0, max_coord, size=2)
        r = Rect(float(min(xs)), float(min(ys)), float(max(xs)), float(max(ys)))
        if not r.is_degenerate():
            rects.append(r)
    return rects


def random_rect_pair_sets(
    rng: np.random.Generator,
    max_rects: int = 20,
    max_coord: float = 2000.0,
) -> tuple[list[Rect], list[Rect]]:
    """A (ref, gen) pair with up to ``max_rects`` rects per side."""
    n_ref = int(rng.integers(0, max_rects + 1))
    n_gen = int(rng.integers(0, max_rects + 1))
    return (
        random_rects(rng, n_ref, max_coord),
        random_rects(rng, n_gen, max_coord),
    )
