"""Image placeholder substitution and script stripping.

Evaluation renders must be hermetic: every image source, local name or
external URL alike, is rewritten to an inline solid-blue data image, and
scripts loaded from external sources are removed.  Sizing attributes and
CSS are left untouched so the substitution never changes layout.

The transforms are string-level on purpose: a document with no images
passes through byte-identical (apart from stripped external scripts),
which a parse/serialize round trip could not guarantee.
"""

from __future__ import annotations

import base64
import functools
import io
import re

__all__ = ["substitute_placeholders", "BLUE_PLACEHOLDER_URI", "blue_placeholder_png"]

_IMG_TAG = re.compile(r"<(img|source|input)\b[^>]*>", re.IGNORECASE)
_SRC_ATTR = re.compile(
    r"""(?P<name>\bsrc)\s*=\s*(?P<q>["'])(?P<value>.*?)(?P=q)""",
    re.IGNORECASE | re.DOTALL,
)
_SRC_ATTR_BARE = re.compile(r"(?P<name>\bsrc)\s*=\s*(?P<value>[^\s\"'>]+)", re.IGNORECASE)
_SRCSET_ATTR = re.compile(
    r"""\s+srcset\s*=\s*(?:(["']).*?\1|[^\s>]+)""", re.IGNORECASE | re.DOTALL
)
_EXTERNAL_SCRIPT = re.compile(
    r"""<script\b[^>]*\bsrc\s*=[^>]*>.*?</script\s*>|<script\b[^>]*\bsrc\s*=[^>]*/>""",
    re.IGNORECASE | re.DOTALL,
)
_INPUT_TYPE_IMAGE = re.compile(r"""\btype\s*=\s*["']?image["']?""", re.IGNORECASE)


@functools.lru_cache(maxsize=1)
def blue_placeholder_png() -> bytes:
    """A small solid-blue PNG used as the universal image stand-in."""
    from PIL import Image

    buf = io.BytesIO()
    Image.new("RGB", (64, 48), (0, 0, 255)).save(buf, format="PNG")
    return buf.getvalue()


def _placeholder_uri() -> str:
    return "data:image/png;base64," + base64.b64encode(blue_placeholder_png()).decode("ascii")


BLUE_PLACEHOLDER_URI = _placeholder_uri()


def _rewrite_tag(match: re.Match) -> str:
    tag_text = match.group(0)
    tag_name = match.group(1).lower()
    if tag_name == "input" and not _INPUT_TYPE_IMAGE.search(tag_text):
        return tag_text
    tag_text = _SRCSET_ATTR.sub("", tag_text)

    def repl(m: re.Match) -> str:
        q = m.group("q") if "q" in m.groupdict() and m.group("q") else '"'
        return f"{m.group('name')}={q}{BLUE_PLACEHOLDER_URI}{q}"

    new_text, n = _SRC_ATTR.subn(repl, tag_text)
    if n == 0:
        new_text = _SRC_ATTR_BARE.sub(lambda m: f"src=\"{BLUE_PLACEHOLDER_URI}\"", tag_text)
    return new_text


def substitute_placeholders(html: str) -> str:
    """Rewrite all image sources to the inline blue placeholder and drop
    externally sourced scripts.  Idempotent."""
    html = _EXTERNAL_SCRIPT.sub("", html)
    return _IMG_TAG.sub(_rewrite_tag, html)
