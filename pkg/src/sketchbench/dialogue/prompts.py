"""Prompt assembly from the stored templates.

Templates live as text resources next to this module and are used
byte-for-byte; substitution touches only the known ``{placeholder}``
tokens, so the literal ``{{...}}`` formatting examples inside the
templates survive untouched.
"""

from __future__ import annotations

from importlib import resources
from functools import lru_cache
from typing import Mapping, Sequence

from .messages import ImageAttachment, Message

__all__ = ["PromptTemplateError", "build_prompt", "template_text", "STAGES"]


class PromptTemplateError(KeyError):
    """A template placeholder had no value in the context."""

    def __init__(self, placeholder: str, template: str):
        super().__init__(f"missing value for {{{placeholder}}} in template {template!r}")
        self.placeholder = placeholder


# (mode, stage) -> (template file, placeholders)
_TEMPLATE_MAP: dict[tuple[str, str], tuple[str, tuple[str, ...]]] = {
    ("direct", "agent_system"): ("direct_agent_system.txt", ()),
    ("direct", "agent_user"): ("direct_agent_user.txt", ("topic",)),
    ("text_augmented", "agent_system"): ("text_augmented_agent_system.txt", ()),
    ("text_augmented", "agent_user"): ("text_augmented_agent_user.txt", ("texts",)),
    ("feedback", "agent_system"): ("text_augmented_agent_system.txt", ()),
    ("feedback", "agent_user"): ("text_augmented_agent_user.txt", ("texts",)),
    ("feedback", "user_system"): ("feedback_user_system.txt", ()),
    ("question", "agent_system"): ("question_agent_system.txt", ()),
    ("question", "agent_user"): ("question_agent_user.txt", ("texts",)),
    ("question", "agent_regen"): ("qa_regen_agent_user.txt", ("texts", "qa_pairs")),
    ("question", "user_system"): ("qa_user_system.txt", ("html_code",)),
}

STAGES = sorted({stage for _, stage in _TEMPLATE_MAP})

_PLACEHOLDER_TOKENS = {
    "topic": "{topic}",
    "texts": "{texts}",
    "qa_pairs": "{qa_pairs}",
    "html_code": "{HTML_CODE}",
}


@lru_cache(maxsize=None)
def template_text(name: str) -> str:
    return resources.files(__package__).joinpath("templates", name).read_text()


def _render(template_name: str, placeholders: tuple[str, ...], ctx: Mapping) -> str:
    text = template_text(template_name)
    for key in placeholders:
        if key not in ctx or ctx[key] is None:
            raise PromptTemplateError(key, template_name)
        value = ctx[key]
        if key == "texts":
            value = "\n".join(value)
        elif key == "qa_pairs":
            from .parsing import format_qa_pairs

            value = format_qa_pairs(value)
        text = text.replace(_PLACEHOLDER_TOKENS[key], str(value))
    return text


def _image(ctx: Mapping, key: str, name: str) -> ImageAttachment:
    if key not in ctx or ctx[key] is None:
        raise PromptTemplateError(key, name)
    return ImageAttachment(name, ctx[key])


def build_prompt(mode: str, stage: str, ctx: Mapping | None = None) -> list[Message]:
    """Messages for one (mode, stage) pair.

    ctx keys by stage: agent user stages take ``sketch_png`` plus the
    template placeholders; the feedback user takes
    ``reference_screenshot_png`` and ``current_screenshot_png``; the
    question user takes ``html_code``, ``sketch_png``, and
    ``reference_screenshot_png``.
    """
    ctx = ctx or {}
    key = (mode, stage)
    if key not in _TEMPLATE_MAP:
        raise ValueError(f"no template for mode={mode!r} stage={stage!r}")
    template_name, placeholders = _TEMPLATE_MAP[key]
    text = _render(template_name, placeholders, ctx)

    if stage == "agent_system":
        return [Message("system", text)]
    if stage in ("agent_user", "agent_regen"):
        return [Message("user", text, (_image(ctx, "sketch_png", "sketch.png"),))]
    if stage == "user_system" and mode == "feedback":
        return [
            Message(
                "user",
                text,
                (
                    _image(ctx, "reference_screenshot_png", "intended.png"),
                    _image(ctx, "current_screenshot_png", "current.png"),
                ),
            )
        ]
    if stage == "user_system" and mode == "question":
        return [
            Message(
                "user",
                text,
                (
                    _image(ctx, "sketch_png", "sketch.png"),
                    _image(ctx, "reference_screenshot_png", "reference.png"),
                ),
            )
        ]
    raise ValueError(f"unhandled stage {stage!r}")  # pragma: no cover
