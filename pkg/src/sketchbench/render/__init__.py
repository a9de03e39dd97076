"""Rendering gateways: headless browser, placeholder substitution, sidecars."""

from .types import RenderError, RenderResult, RenderTimeout, Viewport
from .placeholders import BLUE_PLACEHOLDER_URI, substitute_placeholders
from .static import (
    GeometryMismatchError,
    SidecarFormatError,
    StaticRenderer,
    parse_geometry_sidecar,
    static_geometry_provider,
    write_geometry_sidecar,
)

__all__ = [
    "Viewport",
    "RenderResult",
    "RenderError",
    "RenderTimeout",
    "substitute_placeholders",
    "BLUE_PLACEHOLDER_URI",
    "static_geometry_provider",
    "StaticRenderer",
    "parse_geometry_sidecar",
    "write_geometry_sidecar",
    "GeometryMismatchError",
    "SidecarFormatError",
]
