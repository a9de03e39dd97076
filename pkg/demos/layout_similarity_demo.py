"""Walk through the layout-similarity metric on a small example.

Two pages, two component classes.  The text blocks overlap by half a
box, the images coincide, and the weighted score lands at 5/9.
"""

import numpy as np

from sketchbench import (
    ComponentBoxSet,
    ComponentClass,
    Rect,
    bucketed_report,
    class_iou,
    layout_similarity,
    rasterized_iou_oracle,
    union_area,
)

print("== union areas ==")
boxes = [Rect(0, 0, 10, 10), Rect(5, 5, 15, 15)]
print(f"two overlapping 10x10 boxes cover {union_area(boxes):.0f} px^2 (100+100-25)")

print("\n== per-class IoU ==")
ref_text = [Rect(0, 0, 10, 10)]
gen_text = [Rect(5, 0, 15, 10)]
ci = class_iou(ref_text, gen_text, ComponentClass.TEXT_BLOCK)
print(f"text blocks: intersection {ci.intersection_area:.0f}, union {ci.union_area:.0f}, "
      f"IoU {ci.iou:.4f}")

print("\n== weighted page score ==")
ref = ComponentBoxSet.from_boxes(
    {
        ComponentClass.TEXT_BLOCK: ref_text,
        ComponentClass.IMAGE: [Rect(0, 20, 10, 25)],
    }
)
gen = ComponentBoxSet.from_boxes(
    {
        ComponentClass.TEXT_BLOCK: gen_text,
        ComponentClass.IMAGE: [Rect(0, 20, 10, 25)],
    }
)
score = layout_similarity(ref, gen)
print(f"overall = {score.overall:.6f}  (5/9 = {5 / 9:.6f})")
for ci in score.per_class:
    print(f"  {ci.component.value:12s} IoU {ci.iou:.4f} weight {score.weights[ci.component]:.4f}")

buckets = bucketed_report(score)
print(f"report buckets: text {buckets.text_iou:.4f}, image {buckets.image_iou:.4f}, "
      f"other {buckets.other_iou}")

print("\n== sweep line vs rasterization oracle ==")
rng = np.random.default_rng(0)
worst = 0.0
for _ in range(200):
    def rand_rects(n):
        out = []
        for _ in range(n):
            x0, y0 = rng.uniform(0, 1800, 2)
            w, h = rng.uniform(1, 400, 2)
            out.append(Rect(x0, y0, x0 + w, y0 + h))
        return out

    a, b = rand_rects(int(rng.integers(0, 20))), rand_rects(int(rng.integers(0, 20)))
    worst = max(worst, abs(class_iou(a, b).iou - rasterized_iou_oracle(a, b).iou))
print(f"largest |sweep - oracle| over 200 random pairs: {worst:.2e}")
