"""Rectangle-union geometry and the weighted layout-similarity score.

All boxes are axis-aligned in CSS pixels.  The area "taken" by a set of
boxes always means the area of their geometric union, so duplicated or
overlapping boxes of the same class never count twice and every IoU stays
in [0, 1].

Two independent area computations live here on purpose: the production
path (:func:`union_area`, a sweep line over compressed x coordinates) and
:func:`rasterized_iou_oracle` (cell marking on the compressed grid), which
exists solely so tests can cross-check the sweep.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .taxonomy import OTHER_BUCKET, ComponentClass

__all__ = [
    "Rect",
    "ComponentBoxSet",
    "ClassIoU",
    "LayoutScore",
    "BucketedReport",
    "union_area",
    "class_iou",
    "layout_similarity",
    "rasterized_iou_oracle",
    "bucketed_report",
]

# Cap on distinct coordinates the rasterization oracle will compress.
_ORACLE_MAX_COORDS = 10_000


@dataclass(frozen=True, order=True)
class Rect:
    """Axis-aligned rectangle with normalized corners (x0 <= x1, y0 <= y1)."""

    x0: float
    y0: float
    x1: float
    y1: float

    def __post_init__(self) -> None:
        x0, y0, x1, y1 = self.x0, self.y0, self.x1, self.y1
        for v in (x0, y0, x1, y1):
            if not math.isfinite(v):
                raise ValueError(f"rect coordinates must be finite, got {v!r}")
        if x1 < x0:
            object.__setattr__(self, "x0", x1)
            object.__setattr__(self, "x1", x0)
        if y1 < y0:
            object.__setattr__(self, "y0", y1)
            object.__setattr__(self, "y1", y0)

    @property
    def width(self) -> float:
        return self.x1 - self.x0

    @property
    def height(self) -> float:
        return self.y1 - self.y0

    @property
    def area(self) -> float:
        return self.width * self.height

    def is_degenerate(self) -> bool:
        """True when the rect has zero width or zero height."""
        return self.x0 == self.x1 or self.y0 == self.y1

    def translated(self, dx: float, dy: float) -> "Rect":
        return Rect(self.x0 + dx, self.y0 + dy, self.x1 + dx, self.y1 + dy)

    def scaled(self, factor: float) -> "Rect":
        if factor <= 0:
            raise ValueError("scale factor must be positive")
        return Rect(self.x0 * factor, self.y0 * factor, self.x1 * factor, self.y1 * factor)

    def clipped(self, bounds: "Rect") -> "Rect":
        """Clip to ``bounds``; a rect fully outside collapses to zero area."""
        x0 = min(max(self.x0, bounds.x0), bounds.x1)
        y0 = min(max(self.y0, bounds.y0), bounds.y1)
        x1 = min(max(self.x1, bounds.x0), bounds.x1)
        y1 = min(max(self.y1, bounds.y0), bounds.y1)
        return Rect(x0, y0, x1, y1)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.x0, self.y0, self.x1, self.y1)


@dataclass(frozen=True)
class ComponentBoxSet:
    """Boxes of one rendered page grouped by component class.

    Zero-area boxes are dropped at construction: invisible elements cannot
    affect perceived layout.  An absent class key is equivalent to an empty
    list.
    """

    boxes_by_class: Mapping[ComponentClass, tuple[Rect, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        cleaned = {
            cls: tuple(r for r in rects if not r.is_degenerate())
            for cls, rects in self.boxes_by_class.items()
        }
        object.__setattr__(self, "boxes_by_class", cleaned)

    @classmethod
    def from_boxes(cls, boxes: Mapping[ComponentClass, Iterable[Rect]]) -> "ComponentBoxSet":
        return cls({c: tuple(v) for c, v in boxes.items()})

    def boxes(self, component: ComponentClass) -> tuple[Rect, ...]:
        return self.boxes_by_class.get(component, ())

    def is_empty(self) -> bool:
        return all(not v for v in self.boxes_by_class.values())

    def translated(self, dx: float, dy: float) -> "ComponentBoxSet":
        return ComponentBoxSet(
            {c: tuple(r.translated(dx, dy) for r in v) for c, v in self.boxes_by_class.items()}
        )

    def scaled(self, factor: float) -> "ComponentBoxSet":
        return ComponentBoxSet(
            {c: tuple(r.scaled(factor) for r in v) for c, v in self.boxes_by_class.items()}
        )


@dataclass(frozen=True)
class ClassIoU:
    """Per-class IoU between the union of reference and generated boxes."""

    component: ComponentClass | None
    ref_area: float
    gen_area: float
    intersection_area: float
    union_area: float
    iou: float
    both_empty: bool = False


@dataclass(frozen=True)
class LayoutScore:
    """Weighted average of per-class IoUs.

    The weight of class c is the combined (reference + generated) union
    area of c divided by the combined area over all classes; classes empty
    on both pages are excluded.
    """

    overall: float
    per_class: tuple[ClassIoU, ...]
    weights: Mapping[ComponentClass, float]
    both_empty: bool = False


@dataclass(frozen=True)
class BucketedReport:
    """The reporting buckets: text, image, the rest, and the overall score.

    A bucket with zero combined area is absent (``None``), not 0.
    """

    text_iou: float | None
    image_iou: float | None
    other_iou: float | None
    overall: float


def union_area(rects: Sequence[Rect]) -> float:
    """Area of the set union of ``rects``; overlapping regions count once.

    Sweep line over x: at every distinct x coordinate the active y
    intervals are merged and the covered length multiplied by the slab
    width.  Deterministic and permutation-invariant.
    """
    events: list[tuple[float, int, float, float]] = []
    for r in rects:
        if r.is_degenerate():
            continue
        events.append((r.x0, 1, r.y0, r.y1))
        events.append((r.x1, -1, r.y0, r.y1))
    if not events:
        return 0.0
    events.sort(key=lambda e: e[0])

    active: list[tuple[float, float]] = []
    total = 0.0
    prev_x = events[0][0]
    i = 0
    n = len(events)
    while i < n:
        x = events[i][0]
        if x > prev_x and active:
            total += _covered_length(active) * (x - prev_x)
        prev_x = x
        while i < n and events[i][0] == x:
            _, kind, y0, y1 = events[i]
            if kind == 1:
                active.append((y0, y1))
            else:
                active.remove((y0, y1))
            i += 1
    return total


def _covered_length(intervals: list[tuple[float, float]]) -> float:
    spans = sorted(intervals)
    total = 0.0
    cur_lo, cur_hi = spans[0]
    for lo, hi in spans[1:]:
        if lo > cur_hi:
            total += cur_hi - cur_lo
            cur_lo, cur_hi = lo, hi
        elif hi > cur_hi:
            cur_hi = hi
    total += cur_hi - cur_lo
    return total


def class_iou(
    ref: Sequence[Rect],
    gen: Sequence[Rect],
    component: ComponentClass | None = None,
) -> ClassIoU:
    """IoU between the union of ``ref`` and the union of ``gen``.

    Intersection and union are computed between the two union regions,
    not between pairwise boxes.  Both sides empty is a perfect match by
    convention (iou = 1, flagged); exactly one side empty scores 0.
    """
    a = union_area(ref)
    b = union_area(gen)
    if a == 0.0 and b == 0.0:
        return ClassIoU(component, 0.0, 0.0, 0.0, 0.0, 1.0, both_empty=True)
    if a == 0.0 or b == 0.0:
        return ClassIoU(component, a, b, 0.0, a + b, 0.0)
    u = union_area(list(ref) + list(gen))
    inter = a + b - u
    inter = min(max(inter, 0.0), a, b)
    iou = min(max(inter / u, 0.0), 1.0)
    return ClassIoU(component, a, b, inter, u, iou)


def layout_similarity(ref: ComponentBoxSet, gen: ComponentBoxSet) -> LayoutScore:
    """Weighted average of per-class IoUs between two pages.

    Classes empty on both pages are excluded.  Two entirely empty pages
    score 1.0 (identity convention); a single empty page scores 0.0, which
    falls out of the per-class IoUs without a special case.
    """
    per_class: list[ClassIoU] = []
    combined: dict[ComponentClass, float] = {}
    for cls in ComponentClass:
        r = ref.boxes(cls)
        g = gen.boxes(cls)
        if not r and not g:
            continue
        ci = class_iou(r, g, cls)
        mass = ci.ref_area + ci.gen_area
        if mass <= 0.0:
            continue
        per_class.append(ci)
        combined[cls] = mass

    if not per_class:
        return LayoutScore(1.0, (), {}, both_empty=True)

    denom = sum(combined.values())
    weights = {cls: mass / denom for cls, mass in combined.items()}
    # Single final division keeps layout_similarity(x, x) == 1.0 exact.
    overall = sum(combined[ci.component] * ci.iou for ci in per_class) / denom
    overall = min(max(overall, 0.0), 1.0)
    return LayoutScore(overall, tuple(per_class), weights)


def rasterized_iou_oracle(
    ref: Sequence[Rect],
    gen: Sequence[Rect],
    component: ComponentClass | None = None,
) -> ClassIoU:
    """Reference answer for :func:`class_iou` built by grid cell marking.

    The x/y edges of both rect lists are compressed into a grid; every
    cell covered by each side is marked and intersection/union areas are
    summed cell by cell.  Independent of the sweep-line path.
    """
    ref = [r for r in ref if not r.is_degenerate()]
    gen = [r for r in gen if not r.is_degenerate()]
    if not ref and not gen:
        return ClassIoU(component, 0.0, 0.0, 0.0, 0.0, 1.0, both_empty=True)

    xs = sorted({r.x0 for r in ref + gen} | {r.x1 for r in ref + gen})
    ys = sorted({r.y0 for r in ref + gen} | {r.y1 for r in ref + gen})
    if len(xs) > _ORACLE_MAX_COORDS or len(ys) > _ORACLE_MAX_COORDS:
        raise ValueError("too many distinct coordinates to rasterize")

    xs_arr = np.asarray(xs)
    ys_arr = np.asarray(ys)
    nx = len(xs) - 1
    ny = len(ys) - 1

    def mark(rects: Sequence[Rect]) -> np.ndarray:
        grid = np.zeros((nx, ny), dtype=bool)
        for r in rects:
            i0 = int(np.searchsorted(xs_arr, r.x0))
            i1 = int(np.searchsorted(xs_arr, r.x1))
            j0 = int(np.searchsorted(ys_arr, r.y0))
            j1 = int(np.searchsorted(ys_arr, r.y1))
            grid[i0:i1, j0:j1] = True
        return grid

    cell_areas = np.outer(np.diff(xs_arr), np.diff(ys_arr))
    ref_grid = mark(ref)
    gen_grid = mark(gen)
    a = float(cell_areas[ref_grid].sum())
    b = float(cell_areas[gen_grid].sum())
    inter = float(cell_areas[ref_grid & gen_grid].sum())
    u = float(cell_areas[ref_grid | gen_grid].sum())
    if a == 0.0 and b == 0.0:
        return ClassIoU(component, 0.0, 0.0, 0.0, 0.0, 1.0, both_empty=True)
    if a == 0.0 or b == 0.0:
        return ClassIoU(component, a, b, 0.0, u, 0.0)
    iou = inter / u
    return ClassIoU(component, a, b, inter, u, iou)


def bucketed_report(score: LayoutScore) -> BucketedReport:
    """Fold a :class:`LayoutScore` into text / image / other buckets.

    ``other_iou`` is the weighted average (same combined-area weights,
    renormalized) over the five non-text, non-image classes present in the
    score.
    """
    by_class = {ci.component: ci for ci in score.per_class}

    text = by_class.get(ComponentClass.TEXT_BLOCK)
    image = by_class.get(ComponentClass.IMAGE)

    other_mass = 0.0
    other_sum = 0.0
    seen_other = False
    for cls in OTHER_BUCKET:
        ci = by_class.get(cls)
        if ci is None:
            continue
        mass = ci.ref_area + ci.gen_area
        if mass <= 0.0:
            continue
        seen_other = True
        other_mass += mass
        other_sum += mass * ci.iou

    return BucketedReport(
        text_iou=text.iou if text is not None else None,
        image_iou=image.iou if image is not None else None,
        other_iou=(other_sum / other_mass) if seen_other else None,
        overall=score.overall,
    )
