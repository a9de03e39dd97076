"""A small static-document DOM on top of ``html.parser``.

Pages are treated as static markup: no scripting, no CSS cascade.  The
tree builder mirrors the browser behaviors that matter for geometry
joins — void elements, a handful of auto-closing tags, and stray end
tags — and nothing more.

Every element gets a *structural path* such as ``html[0]/body[0]/div[2]``:
slash-joined ``tag[n]`` segments where ``n`` counts preceding same-tag
siblings.  ``tbody``/``thead``/``tfoot`` are transparent for paths (they
are skipped as segments) so that markup with and without the implicit
table sections produces the same keys.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from html.parser import HTMLParser
from typing import Iterator

__all__ = [
    "Document",
    "Element",
    "TextNode",
    "HtmlParseError",
    "parse_html",
    "structural_paths",
]

VOID_ELEMENTS = frozenset(
    "area base br col embed hr img input link meta param source track wbr".split()
)

# start of tag X implicitly closes an open Y when X is in _AUTOCLOSE[Y]
_BLOCKISH = frozenset(
    "address article aside blockquote div dl fieldset figure footer form "
    "h1 h2 h3 h4 h5 h6 header hr main nav ol p pre section table ul".split()
)
_AUTOCLOSE: dict[str, frozenset[str]] = {
    "p": _BLOCKISH,
    "li": frozenset({"li"}),
    "td": frozenset({"td", "th", "tr"}),
    "th": frozenset({"td", "th", "tr"}),
    "tr": frozenset({"tr"}),
    "option": frozenset({"option", "optgroup"}),
    "dt": frozenset({"dt", "dd"}),
    "dd": frozenset({"dt", "dd"}),
}

# transparent for structural paths
_TRANSPARENT = frozenset({"tbody", "thead", "tfoot"})

_WS = re.compile(r"\s+")


class HtmlParseError(ValueError):
    """Raised when the underlying parser rejects the markup."""

    def __init__(self, message: str, byte_offset: int):
        super().__init__(f"{message} (byte offset {byte_offset})")
        self.byte_offset = byte_offset


@dataclass
class TextNode:
    text: str


@dataclass
class Element:
    tag: str
    attrs: dict[str, str]
    children: list["Element | TextNode"] = field(default_factory=list)

    def child_elements(self) -> list["Element"]:
        return [c for c in self.children if isinstance(c, Element)]

    def direct_text(self) -> str:
        """Whitespace-collapsed concatenation of this element's own text nodes."""
        parts = [c.text for c in self.children if isinstance(c, TextNode)]
        return _WS.sub(" ", " ".join(parts)).strip()

    def has_direct_text(self) -> bool:
        return bool(self.direct_text())

    def all_text(self) -> str:
        """Whitespace-collapsed text of the whole subtree."""
        parts: list[str] = []

        def walk(el: Element) -> None:
            for c in el.children:
                if isinstance(c, TextNode):
                    parts.append(c.text)
                else:
                    walk(c)

        walk(self)
        return _WS.sub(" ", " ".join(parts)).strip()


@dataclass
class Document:
    roots: list[Element]

    def iter_elements(self, skip_tags: frozenset[str] = frozenset()) -> Iterator[Element]:
        """Document-order traversal; ``skip_tags`` prunes whole subtrees."""
        stack = list(reversed(self.roots))
        while stack:
            el = stack.pop()
            if el.tag in skip_tags:
                continue
            yield el
            stack.extend(reversed(el.child_elements()))

    def find_first(self, tag: str) -> Element | None:
        for el in self.iter_elements():
            if el.tag == tag:
                return el
        return None


class _TreeBuilder(HTMLParser):
    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.roots: list[Element] = []
        self.stack: list[Element] = []

    # -- tree assembly -------------------------------------------------
    def _append(self, node: Element | TextNode) -> None:
        if self.stack:
            self.stack[-1].children.append(node)
        elif isinstance(node, Element):
            self.roots.append(node)
        elif node.text.strip():
            # loose top-level text gets an implicit container
            holder = Element("body", {})
            holder.children.append(node)
            self.roots.append(holder)

    def handle_starttag(self, tag, attrs):
        tag = tag.lower()
        while self.stack and tag in _AUTOCLOSE.get(self.stack[-1].tag, frozenset()):
            self.stack.pop()
        el = Element(tag, {k.lower(): (v if v is not None else "") for k, v in attrs})
        self._append(el)
        if tag not in VOID_ELEMENTS:
            self.stack.append(el)

    def handle_startendtag(self, tag, attrs):
        tag = tag.lower()
        el = Element(tag, {k.lower(): (v if v is not None else "") for k, v in attrs})
        self._append(el)

    def handle_endtag(self, tag):
        tag = tag.lower()
        for i in range(len(self.stack) - 1, -1, -1):
            if self.stack[i].tag == tag:
                del self.stack[i:]
                return
        # stray end tag: ignore, as browsers do

    def handle_data(self, data):
        if data:
            self._append(TextNode(data))


def parse_html(html: str) -> Document:
    """Parse markup into a :class:`Document`.

    Recovery mirrors browser behavior; a genuinely unparseable input
    raises :class:`HtmlParseError` with the byte offset of the failure.
    """
    builder = _TreeBuilder()
    try:
        builder.feed(html)
        builder.close()
    except Exception as exc:  # html.parser failures carry a position
        line, col = builder.getpos()
        offset = _byte_offset(html, line, col)
        raise HtmlParseError(str(exc), offset) from exc
    return Document(builder.roots)


def _byte_offset(html: str, line: int, col: int) -> int:
    lines = html.splitlines(keepends=True)
    prefix = "".join(lines[: line - 1])
    return len(prefix.encode("utf-8")) + col


def structural_paths(doc: Document) -> dict[str, Element]:
    """Map every element to its structural path (document order preserved)."""
    out: dict[str, Element] = {}

    def assign(el: Element, parent_path: str, counters: dict[str, int]) -> None:
        if el.tag in _TRANSPARENT:
            for child in el.child_elements():
                assign(child, parent_path, counters)
            return
        idx = counters.get(el.tag, 0)
        counters[el.tag] = idx + 1
        path = f"{parent_path}/{el.tag}[{idx}]" if parent_path else f"{el.tag}[{idx}]"
        out[path] = el
        child_counters: dict[str, int] = {}
        for child in el.child_elements():
            assign(child, path, child_counters)

    root_counters: dict[str, int] = {}
    for root in doc.roots:
        assign(root, "", root_counters)
    return out


def path_candidates(path: str) -> list[str]:
    """Lookup aliases for a structural path.

    A document rendered by a browser gains an implicit ``html[0]/body[0]``
    wrapper that markup fragments lack; try both spellings.
    """
    candidates = [path]
    prefix = "html[0]/body[0]/"
    if path.startswith(prefix):
        candidates.append(path[len(prefix) :])
    else:
        candidates.append(prefix + path)
    return candidates
