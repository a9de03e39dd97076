"""Per-turn metric evaluation against a precomputed reference.

The reference page is rendered and decomposed once per sample and cached
on disk keyed by content hash; each generated page then goes through
placeholder substitution, render, component extraction, and the layout
similarity score.
"""

from __future__ import annotations

import hashlib
import json
import subprocess
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Protocol

from ..dialogue.session import EvaluationOutcome
from ..geometry import ComponentBoxSet, Rect, bucketed_report, layout_similarity
from ..html import extract_components, extract_text_blocks, page_topic
from ..render import RenderError, RenderResult, Viewport, substitute_placeholders
from ..taxonomy import ComponentClass
from .dataset import SampleRecord

__all__ = [
    "TurnMetrics",
    "ReferenceContext",
    "ReferenceStore",
    "prepare_reference",
    "evaluate_turn",
    "TurnEvaluator",
    "ExternalMetricAdapter",
    "SubprocessMetricAdapter",
]

Renderer = Callable[[str, Viewport], RenderResult]


@dataclass
class TurnMetrics:
    """Scores for one generated page at turn k."""

    k: int
    layout_overall: float
    text_iou: float | None
    image_iou: float | None
    other_iou: float | None
    per_class: dict[str, float]
    external_visual: float | None = None

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "layout_overall": self.layout_overall,
            "text_iou": self.text_iou,
            "image_iou": self.image_iou,
            "other_iou": self.other_iou,
            "per_class": dict(self.per_class),
            "external_visual": self.external_visual,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TurnMetrics":
        return cls(
            k=data["k"],
            layout_overall=data["layout_overall"],
            text_iou=data.get("text_iou"),
            image_iou=data.get("image_iou"),
            other_iou=data.get("other_iou"),
            per_class=dict(data.get("per_class", {})),
            external_visual=data.get("external_visual"),
        )


@dataclass
class ReferenceContext:
    """Everything derived from the reference page, computed once."""

    sample_id: str
    boxes: ComponentBoxSet
    page: Rect
    topic: str
    texts: tuple[str, ...]
    html: str
    substituted_html: str
    screenshot_png: bytes


class ExternalMetricAdapter(Protocol):
    """Optional visual-similarity plug-in.

    Input contract: paths to two screenshots and two HTML files
    (reference first); returns one scalar in [0, 1].
    """

    def __call__(
        self, ref_screenshot: Path, gen_screenshot: Path, ref_html: Path, gen_html: Path
    ) -> float: ...


class SubprocessMetricAdapter:
    """Runs an external command for the visual metric.

    The command receives the four paths as arguments appended in the
    fixed order (ref screenshot, gen screenshot, ref html, gen html) and
    must print the scalar (optionally as ``{"score": x}``) on stdout.
    """

    def __init__(self, command: list[str], timeout: float = 120.0):
        self.command = list(command)
        self.timeout = timeout

    def __call__(self, ref_screenshot, gen_screenshot, ref_html, gen_html) -> float:
        argv = self.command + [
            str(ref_screenshot),
            str(gen_screenshot),
            str(ref_html),
            str(gen_html),
        ]
        proc = subprocess.run(
            argv, capture_output=True, text=True, timeout=self.timeout, check=True
        )
        out = proc.stdout.strip()
        try:
            return float(json.loads(out)["score"]) if out.startswith("{") else float(out)
        except (ValueError, KeyError) as exc:
            raise RuntimeError(f"external metric produced unparseable output: {out!r}") from exc


def prepare_reference(
    sample: SampleRecord, renderer: Renderer, viewport: Viewport | None = None
) -> ReferenceContext:
    viewport = viewport or Viewport()
    html = Path(sample.html_path).read_text()
    substituted = substitute_placeholders(html)
    result = renderer(substituted, viewport)
    boxes = extract_components(substituted, result.geometry, result.page)
    return ReferenceContext(
        sample_id=sample.sample_id,
        boxes=boxes,
        page=result.page,
        topic=page_topic(html),
        texts=extract_text_blocks(html).blocks,
        html=html,
        substituted_html=substituted,
        screenshot_png=Path(sample.screenshot_path).read_bytes(),
    )


class ReferenceStore:
    """Disk cache of reference decompositions keyed by content hash."""

    def __init__(self, cache_dir: str | Path):
        self.cache_dir = Path(cache_dir)
        self.cache_dir.mkdir(parents=True, exist_ok=True)

    @staticmethod
    def _key(sample: SampleRecord, viewport: Viewport) -> str:
        digest = hashlib.sha256()
        digest.update(Path(sample.html_path).read_bytes())
        digest.update(f"|{viewport.width}|{viewport.device_scale}".encode())
        return digest.hexdigest()

    def get_or_build(
        self, sample: SampleRecord, renderer: Renderer, viewport: Viewport | None = None
    ) -> ReferenceContext:
        viewport = viewport or Viewport()
        path = self.cache_dir / f"{self._key(sample, viewport)}.json"
        if path.exists():
            data = json.loads(path.read_text())
            return ReferenceContext(
                sample_id=sample.sample_id,
                boxes=ComponentBoxSet.from_boxes(
                    {
                        ComponentClass(cls): [Rect(*r) for r in rects]
                        for cls, rects in data["boxes"].items()
                    }
                ),
                page=Rect(*data["page"]),
                topic=data["topic"],
                texts=tuple(data["texts"]),
                html=data["html"],
                substituted_html=data["substituted_html"],
                screenshot_png=Path(sample.screenshot_path).read_bytes(),
            )
        ctx = prepare_reference(sample, renderer, viewport)
        path.write_text(
            json.dumps(
                {
                    "boxes": {
                        cls.value: [r.as_tuple() for r in rects]
                        for cls, rects in ctx.boxes.boxes_by_class.items()
                    },
                    "page": ctx.page.as_tuple(),
                    "topic": ctx.topic,
                    "texts": list(ctx.texts),
                    "html": ctx.html,
                    "substituted_html": ctx.substituted_html,
                }
            )
        )
        return ctx


def evaluate_turn(
    reference: ReferenceContext,
    generated_html: str,
    renderer: Renderer,
    viewport: Viewport | None = None,
    k: int = 0,
    external: ExternalMetricAdapter | None = None,
) -> TurnMetrics:
    """Score one generated page against the reference.

    Raises :class:`~sketchbench.render.RenderError` when the page cannot
    be rendered; callers that must keep going wrap this in
    :class:`TurnEvaluator`, which records a failed-turn marker instead.
    """
    viewport = viewport or Viewport()
    substituted = substitute_placeholders(generated_html)
    result = renderer(substituted, viewport)
    gen_boxes = extract_components(substituted, result.geometry, result.page)
    score = layout_similarity(reference.boxes, gen_boxes)
    buckets = bucketed_report(score)
    external_score = None
    if external is not None:
        external_score = _run_external(external, reference, generated_html, result)
    return TurnMetrics(
        k=k,
        layout_overall=score.overall,
        text_iou=buckets.text_iou,
        image_iou=buckets.image_iou,
        other_iou=buckets.other_iou,
        per_class={ci.component.value: ci.iou for ci in score.per_class},
        external_visual=external_score,
    )


def _run_external(
    adapter: ExternalMetricAdapter,
    reference: ReferenceContext,
    generated_html: str,
    result: RenderResult,
) -> float:
    with tempfile.TemporaryDirectory(prefix="extmetric") as tmp:
        tmp_path = Path(tmp)
        ref_shot = tmp_path / "ref.png"
        gen_shot = tmp_path / "gen.png"
        ref_html = tmp_path / "ref.html"
        gen_html = tmp_path / "gen.html"
        ref_shot.write_bytes(reference.screenshot_png)
        gen_shot.write_bytes(result.screenshot_png())
        ref_html.write_text(reference.html)
        gen_html.write_text(generated_html)
        return float(adapter(ref_shot, gen_shot, ref_html, gen_html))


class TurnEvaluator:
    """Session-facing evaluator: errors become failed-turn markers."""

    def __init__(
        self,
        reference: ReferenceContext,
        renderer: Renderer,
        viewport: Viewport | None = None,
        external: ExternalMetricAdapter | None = None,
    ):
        self.reference = reference
        self.renderer = renderer
        self.viewport = viewport or Viewport()
        self.external = external
        self.renders: dict[int, bytes] = {}

    def __call__(self, html: str, k: int) -> EvaluationOutcome:
        try:
            substituted = substitute_placeholders(html)
            result = self.renderer(substituted, self.viewport)
            gen_boxes = extract_components(substituted, result.geometry, result.page)
        except (RenderError, KeyError, ValueError) as exc:
            return EvaluationOutcome(metrics=None, screenshot_png=None, error=str(exc))
        score = layout_similarity(self.reference.boxes, gen_boxes)
        buckets = bucketed_report(score)
        external_score = None
        if self.external is not None:
            try:
                external_score = _run_external(self.external, self.reference, html, result)
            except Exception as exc:
                return EvaluationOutcome(metrics=None, error=f"external metric failed: {exc}")
        metrics = TurnMetrics(
            k=k,
            layout_overall=score.overall,
            text_iou=buckets.text_iou,
            image_iou=buckets.image_iou,
            other_iou=buckets.other_iou,
            per_class={ci.component.value: ci.iou for ci in score.per_class},
            external_visual=external_score,
        )
        png = result.screenshot_png()
        self.renders[k] = png
        return EvaluationOutcome(metrics=metrics, screenshot_png=png)
