"""Evaluation harness for sketch-to-code agents.

The package is organized as a plain library:

``sketchbench.geometry``
    Rectangle-union areas, per-class IoU, and the weighted layout
    similarity score.
``sketchbench.html``
    Static HTML parsing, the component taxonomy selectors, and text
    extraction.
``sketchbench.render``
    Placeholder substitution, a headless-browser gateway, and a
    sidecar-driven static geometry provider for hermetic runs.
``sketchbench.sketch``
    Synthetic wireframe generation: Canny edges, image placeholders,
    and Bezier squiggle text lines.
``sketchbench.dialogue``
    The multi-turn protocols (direct, feedback, question) between an
    agent backend and a simulated or human user.
``sketchbench.bench``
    Dataset loading, run orchestration, aggregation, the CLI, and the
    HTTP session service.
"""

from .taxonomy import ComponentClass
from .geometry import (
    ClassIoU,
    ComponentBoxSet,
    LayoutScore,
    Rect,
    bucketed_report,
    class_iou,
    layout_similarity,
    rasterized_iou_oracle,
    union_area,
)

__version__ = "0.1.0"

__all__ = [
    "ComponentClass",
    "Rect",
    "ComponentBoxSet",
    "ClassIoU",
    "LayoutScore",
    "union_area",
    "class_iou",
    "layout_similarity",
    "rasterized_iou_oracle",
    "bucketed_report",
    "__version__",
]
