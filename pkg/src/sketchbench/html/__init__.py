"""Static HTML parsing, component classification, and text extraction."""

from .dom import Document, Element, HtmlParseError, parse_html, structural_paths
from .selectors import Selector, SELECTOR_TABLE, classify_element
from .components import (
    ClassifiedElement,
    TextInventory,
    extract_components,
    extract_text_blocks,
    page_topic,
)

__all__ = [
    "Document",
    "Element",
    "HtmlParseError",
    "parse_html",
    "structural_paths",
    "Selector",
    "SELECTOR_TABLE",
    "classify_element",
    "ClassifiedElement",
    "TextInventory",
    "extract_components",
    "extract_text_blocks",
    "page_topic",
]
