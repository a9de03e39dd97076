"""The component-taxonomy selector engine.

Only the selector constructs the taxonomy actually uses are supported:
type selectors, the ``.class`` shorthand, and the attribute forms
``[attr="v"]`` (equality), ``[attr~="v"]`` (whitespace-token match), and
``[attr*="v"]`` (substring match).  A full CSS engine is out of scope.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping

from ..taxonomy import CLASSIFICATION_PRECEDENCE, ComponentClass

__all__ = ["Selector", "SELECTOR_TABLE", "classify_element"]

_SELECTOR_RE = re.compile(
    r"""^
    (?P<tag>[a-zA-Z][a-zA-Z0-9]*)?
    (?P<rest>(?:\.[-\w]+|\[[^\]]+\])*)
    $""",
    re.VERBOSE,
)
_POSTFIX_RE = re.compile(r"\.(?P<cls>[-\w]+)|\[(?P<attr>[-\w]+)(?:(?P<op>~=|\*=|=)(?P<val>[^\]]*))?\]")


@dataclass(frozen=True)
class Selector:
    """One compiled simple selector: optional tag plus attribute conditions."""

    source: str
    tag: str | None
    conditions: tuple[tuple[str, str, str], ...]  # (attr, op, value)

    @classmethod
    def parse(cls, source: str) -> "Selector":
        m = _SELECTOR_RE.match(source.strip())
        if not m:
            raise ValueError(f"unsupported selector: {source!r}")
        tag = m.group("tag")
        conditions: list[tuple[str, str, str]] = []
        rest = m.group("rest") or ""
        for pm in _POSTFIX_RE.finditer(rest):
            if pm.group("cls"):
                conditions.append(("class", "~=", pm.group("cls")))
                continue
            attr = pm.group("attr").lower()
            op = pm.group("op")
            if op is None:
                conditions.append((attr, "present", ""))
            else:
                val = pm.group("val").strip()
                if val[:1] in "\"'" and val[:1] == val[-1:]:
                    val = val[1:-1]
                conditions.append((attr, op, val))
        return cls(source, tag.lower() if tag else None, tuple(conditions))

    def matches(self, tag: str, attributes: Mapping[str, str]) -> bool:
        if self.tag is not None and tag != self.tag:
            return False
        for attr, op, val in self.conditions:
            actual = attributes.get(attr)
            if actual is None:
                return False
            if op == "present":
                continue
            if op == "=":
                if actual != val:
                    return False
            elif op == "~=":
                if val not in actual.split():
                    return False
            elif op == "*=":
                if val not in actual:
                    return False
            else:  # pragma: no cover - parse() only emits the ops above
                raise AssertionError(op)
        return True


def _compile(sources: tuple[str, ...]) -> tuple[Selector, ...]:
    return tuple(Selector.parse(s) for s in sources)


# One selector list per component class.
SELECTOR_TABLE: dict[ComponentClass, tuple[Selector, ...]] = {
    ComponentClass.VIDEO: _compile(("video",)),
    ComponentClass.IMAGE: _compile(("img",)),
    ComponentClass.TEXT_BLOCK: _compile(
        (
            "p",
            "span",
            "a",
            "strong",
            "h1",
            "h2",
            "h3",
            "h4",
            "h5",
            "h6",
            "li",
            "th",
            "td",
            "label",
            "code",
            "pre",
            "div",
        )
    ),
    ComponentClass.FORM_TABLE: _compile(("form", "table", "div.form")),
    ComponentClass.BUTTON: _compile(
        (
            "button",
            'input[type="button"]',
            'input[type="submit"]',
            '[role="button"]',
        )
    ),
    ComponentClass.NAVIGATION_BAR: _compile(
        (
            "nav",
            '[role="navigation"]',
            ".navbar",
            '[class~="nav"]',
            '[class~="navigation"]',
            '[class~="menu"]',
            '[class~="navbar"]',
            '[id="menu"]',
            '[id="nav"]',
            '[id="navigation"]',
            '[id="navbar"]',
        )
    ),
    ComponentClass.DIVIDER: _compile(
        (
            "hr",
            '[class*="separator"]',
            '[class*="divider"]',
            '[id="separator"]',
            '[id="divider"]',
            '[role="separator"]',
        )
    ),
}


def classify_element(
    tag: str,
    attributes: Mapping[str, str],
    has_direct_text: bool,
) -> ComponentClass | None:
    """Classify one element, or return ``None`` when nothing matches.

    Classes are tried in precedence order so an element matching several
    selectors receives exactly one class.  The text-block class applies
    only to elements with direct non-whitespace text; without that
    restriction the bare ``div`` selector would swallow nearly every
    container on a page.
    """
    for cls in CLASSIFICATION_PRECEDENCE:
        if cls is ComponentClass.TEXT_BLOCK and not has_direct_text:
            continue
        if any(sel.matches(tag, attributes) for sel in SELECTOR_TABLE[cls]):
            return cls
    return None
