"""Join parsed markup with rendered geometry into component box sets."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping

from ..geometry import ComponentBoxSet, Rect
from ..taxonomy import ComponentClass
from .dom import Document, parse_html, path_candidates, structural_paths
from .selectors import classify_element

__all__ = [
    "ClassifiedElement",
    "TextInventory",
    "extract_components",
    "extract_text_blocks",
    "page_topic",
]

_WS = re.compile(r"\s+")


@dataclass(frozen=True)
class ClassifiedElement:
    """One classified element joined with its rendered rect."""

    path: str
    component: ComponentClass
    rect: Rect


@dataclass(frozen=True)
class TextInventory:
    """Visible text blocks in document order, whitespace-normalized."""

    blocks: tuple[str, ...]


def _as_document(html: str | Document) -> Document:
    return html if isinstance(html, Document) else parse_html(html)


def _lookup_rect(geometry: Mapping[str, Rect], path: str) -> Rect | None:
    for candidate in path_candidates(path):
        rect = geometry.get(candidate)
        if rect is not None:
            return rect
    return None


def classified_elements(
    html: str | Document,
    geometry: Mapping[str, Rect],
    page: Rect,
) -> list[ClassifiedElement]:
    """Classify every element and attach its page-clipped rect.

    Elements without geometry (unrendered) and elements whose clipped
    rect has zero area (invisible) are dropped.  Each element contributes
    only its own box; overlap with same-class ancestors is resolved by
    the union semantics of the metric, not here.
    """
    doc = _as_document(html)
    out: list[ClassifiedElement] = []
    for path, el in structural_paths(doc).items():
        cls = classify_element(el.tag, el.attrs, el.has_direct_text())
        if cls is None:
            continue
        rect = _lookup_rect(geometry, path)
        if rect is None:
            continue
        clipped = rect.clipped(page)
        if clipped.is_degenerate():
            continue
        out.append(ClassifiedElement(path, cls, clipped))
    return out


def extract_components(
    html: str | Document,
    geometry: Mapping[str, Rect],
    page: Rect,
) -> ComponentBoxSet:
    """Extract the per-class box set of one rendered page."""
    grouped: dict[ComponentClass, list[Rect]] = {}
    for item in classified_elements(html, geometry, page):
        grouped.setdefault(item.component, []).append(item.rect)
    return ComponentBoxSet.from_boxes(grouped)


def extract_text_blocks(html: str | Document) -> TextInventory:
    """Direct text of every element, in document order.

    One block per element with direct non-whitespace text; script, style,
    and head subtrees are excluded and runs of whitespace collapse to a
    single space.
    """
    doc = _as_document(html)
    blocks: list[str] = []
    for el in doc.iter_elements(skip_tags=frozenset({"script", "style", "head"})):
        text = el.direct_text()
        if text:
            blocks.append(text)
    return TextInventory(tuple(blocks))


def page_topic(html: str | Document) -> str:
    """The page title, whitespace-normalized; a missing or empty title
    falls back to the generic "a webpage"."""
    doc = _as_document(html)
    title = doc.find_first("title")
    if title is None:
        return "a webpage"
    text = _WS.sub(" ", title.all_text()).strip()
    return text if text else "a webpage"
