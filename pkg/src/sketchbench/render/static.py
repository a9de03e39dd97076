"""Geometry sidecars and the browser-free render provider.

Sidecar format (shared with the HTML extractor fixtures): a line-oriented
text file, one record per element, tab-separated fields in fixed order::

    <element path> <x0> <y0> <x1> <y1>

Blank lines and lines starting with ``#`` are ignored.  A record whose
path is the literal word ``page`` sets the page bounds; without one the
page is the envelope of all rects anchored at the origin.
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from ..geometry import Rect
from ..html.dom import parse_html, structural_paths
from .types import RenderResult, Viewport

__all__ = [
    "SidecarFormatError",
    "GeometryMismatchError",
    "parse_geometry_sidecar",
    "write_geometry_sidecar",
    "static_geometry_provider",
    "StaticRenderer",
]

PAGE_RECORD = "page"


class SidecarFormatError(ValueError):
    """A sidecar line did not match the record format."""


class GeometryMismatchError(ValueError):
    """A sidecar path does not exist in the document."""

    def __init__(self, path: str):
        super().__init__(f"sidecar path not present in document: {path}")
        self.path = path


def parse_geometry_sidecar(text: str) -> tuple[dict[str, Rect], Rect | None]:
    """Parse sidecar text into (geometry map, optional page bounds)."""
    geometry: dict[str, Rect] = {}
    page: Rect | None = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = stripped.split("\t") if "\t" in stripped else stripped.split()
        if len(fields) != 5:
            raise SidecarFormatError(f"line {lineno}: expected 5 fields, got {len(fields)}")
        path, *coords = fields
        try:
            x0, y0, x1, y1 = (float(c) for c in coords)
        except ValueError as exc:
            raise SidecarFormatError(f"line {lineno}: {exc}") from exc
        rect = Rect(x0, y0, x1, y1)
        if path == PAGE_RECORD:
            page = rect
        else:
            geometry[path] = rect
    return geometry, page


def write_geometry_sidecar(
    records: Mapping[str, Rect], page: Rect | None = None
) -> str:
    lines = []
    if page is not None:
        lines.append(f"{PAGE_RECORD}\t{page.x0:g}\t{page.y0:g}\t{page.x1:g}\t{page.y1:g}")
    for path, r in records.items():
        lines.append(f"{path}\t{r.x0:g}\t{r.y0:g}\t{r.x1:g}\t{r.y1:g}")
    return "\n".join(lines) + "\n"


def _blank_screenshot(page: Rect, device_scale: float = 1.0) -> np.ndarray:
    w = max(1, int(round(page.width * device_scale)))
    h = max(1, int(round(page.height * device_scale)))
    return np.full((h, w, 3), 255, dtype=np.uint8)


def static_geometry_provider(html: str, sidecar: str | os.PathLike) -> RenderResult:
    """Build a :class:`RenderResult` from a geometry sidecar instead of a
    browser, enabling fully hermetic metric runs.

    Every sidecar path must exist in the parsed document; an unknown path
    raises :class:`GeometryMismatchError` naming it.  The screenshot is a
    blank page-sized raster.
    """
    text = _sidecar_text(sidecar)
    geometry, page = parse_geometry_sidecar(text)
    doc = parse_html(html)
    known = structural_paths(doc)
    for path in geometry:
        if path not in known:
            raise GeometryMismatchError(path)
    if page is None:
        x1 = max((r.x1 for r in geometry.values()), default=1.0)
        y1 = max((r.y1 for r in geometry.values()), default=1.0)
        page = Rect(0.0, 0.0, x1, y1)
    clipped = {p: r.clipped(page) for p, r in geometry.items()}
    return RenderResult(
        screenshot=_blank_screenshot(page),
        page=page,
        geometry=clipped,
        console_errors=[],
    )


def _sidecar_text(sidecar: str | os.PathLike) -> str:
    """Accept a sidecar as a file path or as already-read content."""
    if isinstance(sidecar, os.PathLike):
        return Path(sidecar).read_text()
    if "\n" not in sidecar:
        try:
            if Path(sidecar).exists():
                return Path(sidecar).read_text()
        except (OSError, ValueError):
            pass
    return sidecar


class StaticRenderer:
    """Render callable backed by registered (html, sidecar) fixtures.

    Lookup is by exact html string.  With ``strict=False`` an unknown
    document renders as an empty page instead of failing, which keeps
    mock benchmark runs going when an agent invents markup.
    """

    def __init__(self, strict: bool = True):
        self._fixtures: dict[str, str] = {}
        self.strict = strict

    def register(self, html: str, sidecar_text: str) -> None:
        self._fixtures[html] = sidecar_text

    def register_file(self, html_path: str | os.PathLike, sidecar_path: str | os.PathLike) -> None:
        self.register(Path(html_path).read_text(), Path(sidecar_path).read_text())

    def __call__(self, html: str, viewport: Viewport | None = None) -> RenderResult:
        sidecar = self._fixtures.get(html)
        if sidecar is None:
            if self.strict:
                raise KeyError("no registered geometry for document")
            page = Rect(0, 0, (viewport or Viewport()).width, 1.0)
            return RenderResult(_blank_screenshot(page), page, {}, [])
        return static_geometry_provider(html, sidecar)
