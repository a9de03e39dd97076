"""Parsing of raw model output into protocol actions.

The conventions: agents emit final code inside a triple-backtick fence
(the last complete fence wins, since models often produce stray fences
while reasoning) and ask questions inside a ``Question: \"\"\"...\"\"\"``
block; the simulated user wraps feedback in ``Feedback: \"\"\"...\"\"\"``
and signals satisfaction with the sentinel ``Generation Complete``.
"""

from __future__ import annotations

import re
from typing import Sequence

from .messages import (
    MAX_QUESTIONS_PER_TURN,
    AgentAction,
    Answers,
    Code,
    Complete,
    Feedback,
    Invalid,
    Questions,
    UserTurn,
)

__all__ = [
    "parse_agent_output",
    "parse_user_feedback",
    "parse_user_answers",
    "format_agent_action",
    "format_questions_block",
    "format_qa_pairs",
]

COMPLETE_SENTINEL = "generation complete"

_QUESTION_BLOCK = re.compile(r'Question:\s*"""(.*?)"""', re.DOTALL)
_FEEDBACK_BLOCK = re.compile(r'Feedback:\s*"""(.*?)(?:"""|\Z)', re.DOTALL)
_NUMBERED_ITEM = re.compile(r"^\s*\d+[.)]\s*(.+?)\s*$")
_FENCE = re.compile(r"```")
_LANG_TAG = re.compile(r"^[A-Za-z0-9_+\-]{0,20}$")


def _split_questions(body: str) -> list[str]:
    items = []
    for line in body.splitlines():
        m = _NUMBERED_ITEM.match(line)
        if m:
            items.append(m.group(1))
    if not items and body.strip():
        items = [body.strip()]
    return items


def _last_fence_content(text: str) -> str | None:
    marks = [m.start() for m in _FENCE.finditer(text)]
    if len(marks) < 2:
        return None
    # pair markers in order; an unpaired trailing marker is ignored
    last_open = marks[len(marks) - 2 if len(marks) % 2 == 0 else len(marks) - 3]
    last_close = marks[-1] if len(marks) % 2 == 0 else marks[-2]
    content = text[last_open + 3 : last_close]
    lines = content.split("\n")
    if len(lines) > 1 and _LANG_TAG.match(lines[0].strip()):
        lines = lines[1:]
    return "\n".join(lines).strip("\n")


def parse_agent_output(text: str) -> AgentAction:
    """A question block wins over any fence; otherwise the last complete
    fence is the code; otherwise the reply is invalid."""
    items: list[str] = []
    for match in _QUESTION_BLOCK.finditer(text):
        items.extend(_split_questions(match.group(1)))
    if items:
        return Questions(tuple(items[:MAX_QUESTIONS_PER_TURN]))
    code = _last_fence_content(text)
    if code is not None and code.strip():
        return Code(code)
    return Invalid("no code fence or question block")


def parse_user_feedback(text: str) -> UserTurn:
    """Extract the triple-quoted feedback body; a reply without the
    quoting convention counts as feedback wholesale."""
    matches = _FEEDBACK_BLOCK.findall(text)
    body = matches[-1].strip() if matches else text.strip()
    if body.casefold() == COMPLETE_SENTINEL:
        return Complete()
    return Feedback(body)


def parse_user_answers(text: str, n_questions: int) -> Answers:
    """Split numbered answers; on any count mismatch the whole reply is
    one combined answer."""
    items = []
    for line in text.splitlines():
        m = _NUMBERED_ITEM.match(line)
        if m:
            items.append(m.group(1))
    if len(items) == n_questions:
        return Answers(tuple(items))
    return Answers((text.strip(),))


def format_questions_block(items: Sequence[str]) -> str:
    if len(items) == 1:
        return f'Question: """{items[0]}"""'
    numbered = "\n".join(f"{i}. {q}" for i, q in enumerate(items, start=1))
    return f'Question: """\n{numbered}\n"""'


def format_agent_action(action: AgentAction) -> str:
    """Inverse of :func:`parse_agent_output` for round-trip checks."""
    if isinstance(action, Code):
        return f"```\n{action.html}\n```"
    if isinstance(action, Questions):
        return format_questions_block(action.items)
    raise ValueError("invalid actions have no canonical form")


def format_qa_pairs(pairs: Sequence[tuple[str, str]]) -> str:
    return "\n\n".join(f"Q: {q}\nA: {a}" for q, a in pairs)
