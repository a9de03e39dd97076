"""Turn a screenshot-like raster into a synthetic wireframe sketch.

Writes three PNGs next to this script: the input, the raw edge map, and
the finished sketch (text squiggles, image boxes with crosses).
"""

from pathlib import Path

import numpy as np

from sketchbench.geometry import Rect
from sketchbench.sketch import SketchRecipe, canny, save_gray_png, synthesize

out_dir = Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)

# a fake page: light background, dark footer band, mid-gray "card"
screenshot = np.full((360, 520), 235, dtype=np.uint8)
screenshot[300:350, 10:510] = 70
screenshot[40:180, 300:500] = 180

text_boxes = [
    Rect(20, 20, 270, 56),    # headline: one tall line
    Rect(20, 70, 270, 160),   # paragraph: several lines
    Rect(20, 310, 500, 342),  # footer text
]
image_boxes = [Rect(310, 50, 490, 170)]

recipe = SketchRecipe(seed=42)
sketch = synthesize(screenshot, text_boxes, image_boxes, recipe)
edges = canny(screenshot, recipe)

save_gray_png(screenshot, out_dir / "demo_input.png")
save_gray_png(edges, out_dir / "demo_edges.png", invert=True)
save_gray_png(sketch, out_dir / "demo_sketch.png", invert=True)

print(f"input     -> {out_dir / 'demo_input.png'}")
print(f"edge map  -> {out_dir / 'demo_edges.png'}")
print(f"sketch    -> {out_dir / 'demo_sketch.png'}")
print(f"stroke pixels in sketch: {(sketch > 0).sum()}")

again = synthesize(screenshot, text_boxes, image_boxes, recipe)
print(f"deterministic under the same recipe: {(again == sketch).all()}")
