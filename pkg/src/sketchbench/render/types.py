"""Shared rendering types."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..geometry import Rect

__all__ = ["Viewport", "RenderResult", "RenderError", "RenderTimeout"]


class RenderError(RuntimeError):
    """A render could not be completed."""


class RenderTimeout(RenderError):
    """The page did not settle within the allotted time."""

    def __init__(self, message: str, console_log: list[str] | None = None):
        super().__init__(message)
        self.console_log = console_log or []


@dataclass(frozen=True)
class Viewport:
    """Render settings; metrics are scale-invariant so the width is a
    convention, not a tuning knob."""

    width: int = 1280
    device_scale: float = 1.0
    full_page: bool = True

    def __post_init__(self) -> None:
        if self.width <= 0:
            raise ValueError("viewport width must be positive")
        if self.device_scale <= 0:
            raise ValueError("device scale must be positive")


@dataclass
class RenderResult:
    """One rendered page: raster, page bounds, and per-element geometry.

    ``geometry`` maps structural element paths to page-space rects, every
    rect already clipped to the page bounds.
    """

    screenshot: np.ndarray  # (H, W, 3) uint8
    page: Rect
    geometry: dict[str, Rect]
    console_errors: list[str] = field(default_factory=list)

    def screenshot_png(self) -> bytes:
        from PIL import Image
        import io

        buf = io.BytesIO()
        Image.fromarray(self.screenshot).save(buf, format="PNG")
        return buf.getvalue()
