"""Chat-transcript carrier types for the dialogue protocols."""

from __future__ import annotations

import base64
import enum
from dataclasses import dataclass, field
from typing import Union

__all__ = [
    "ModelParams",
    "ImageAttachment",
    "Message",
    "Code",
    "Questions",
    "Invalid",
    "AgentAction",
    "Feedback",
    "Answers",
    "Complete",
    "UserTurn",
    "Termination",
    "TurnRecord",
    "SessionTranscript",
    "SessionSample",
]

MAX_QUESTIONS_PER_TURN = 5


@dataclass(frozen=True)
class ModelParams:
    """Sampling settings shared by agent and simulated-user calls."""

    temperature: float = 0.0
    top_p: float = 1.0
    max_tokens: int = 4096
    frequency_penalty: float = 0.0
    presence_penalty: float = 0.0
    repetition_penalty: float = 0.0
    best_of: int = 1

    def __post_init__(self) -> None:
        if self.max_tokens <= 0:
            raise ValueError("max_tokens must be positive")
        if self.best_of < 1:
            raise ValueError("best_of must be at least 1")


@dataclass(frozen=True)
class ImageAttachment:
    name: str
    png: bytes

    def to_dict(self) -> dict:
        return {"name": self.name, "png_base64": base64.b64encode(self.png).decode("ascii")}

    @classmethod
    def from_dict(cls, data: dict) -> "ImageAttachment":
        return cls(data["name"], base64.b64decode(data["png_base64"]))


@dataclass(frozen=True)
class Message:
    role: str  # system | user | assistant
    text: str = ""
    images: tuple[ImageAttachment, ...] = ()

    def __post_init__(self) -> None:
        if self.role not in ("system", "user", "assistant"):
            raise ValueError(f"unknown role {self.role!r}")
        if self.role == "system" and self.images:
            raise ValueError("system messages carry no images")
        if not self.text and not self.images:
            raise ValueError("a message needs text or at least one image")

    def to_dict(self) -> dict:
        return {
            "role": self.role,
            "text": self.text,
            "images": [img.to_dict() for img in self.images],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Message":
        return cls(
            data["role"],
            data.get("text", ""),
            tuple(ImageAttachment.from_dict(i) for i in data.get("images", [])),
        )


# -- agent actions ------------------------------------------------------


@dataclass(frozen=True)
class Code:
    html: str


@dataclass(frozen=True)
class Questions:
    items: tuple[str, ...]

    def __post_init__(self) -> None:
        if not (1 <= len(self.items) <= MAX_QUESTIONS_PER_TURN):
            raise ValueError("questions per turn must be between 1 and 5")


@dataclass(frozen=True)
class Invalid:
    reason: str


AgentAction = Union[Code, Questions, Invalid]


# -- user turns ----------------------------------------------------------


@dataclass(frozen=True)
class Feedback:
    text: str


@dataclass(frozen=True)
class Answers:
    items: tuple[str, ...]


@dataclass(frozen=True)
class Complete:
    pass


UserTurn = Union[Feedback, Answers, Complete]


def action_to_dict(action: AgentAction | None) -> dict | None:
    if action is None:
        return None
    if isinstance(action, Code):
        return {"kind": "code", "html": action.html}
    if isinstance(action, Questions):
        return {"kind": "questions", "items": list(action.items)}
    return {"kind": "invalid", "reason": action.reason}


def action_from_dict(data: dict | None) -> AgentAction | None:
    if data is None:
        return None
    kind = data["kind"]
    if kind == "code":
        return Code(data["html"])
    if kind == "questions":
        return Questions(tuple(data["items"]))
    return Invalid(data["reason"])


def user_turn_to_dict(turn: UserTurn | None) -> dict | None:
    if turn is None:
        return None
    if isinstance(turn, Feedback):
        return {"kind": "feedback", "text": turn.text}
    if isinstance(turn, Answers):
        return {"kind": "answers", "items": list(turn.items)}
    return {"kind": "complete"}


def user_turn_from_dict(data: dict | None) -> UserTurn | None:
    if data is None:
        return None
    kind = data["kind"]
    if kind == "feedback":
        return Feedback(data["text"])
    if kind == "answers":
        return Answers(tuple(data["items"]))
    return Complete()


class Termination(enum.Enum):
    BUDGET_EXHAUSTED = "budget_exhausted"
    USER_COMPLETE = "user_complete"
    AGENT_FAILURE = "agent_failure"
    # the agent answered the ask-questions prompt with final code, so the
    # question protocol has nothing left to iterate on
    AGENT_COMPLETE = "agent_complete"


@dataclass
class TurnRecord:
    """One protocol turn.

    ``agent_messages`` and ``user_messages`` hold the messages *added*
    during this turn on each side (prompt messages plus the accepted
    reply as an assistant message), so concatenating them over turns
    reconstructs both conversations exactly.
    """

    k: int
    agent_messages: list[Message] = field(default_factory=list)
    user_messages: list[Message] = field(default_factory=list)
    action: AgentAction | None = None
    user_turn: UserTurn | None = None
    generated_html: str | None = None
    metrics: object | None = None
    error: str | None = None

    def to_dict(self) -> dict:
        metrics = self.metrics
        if metrics is not None and hasattr(metrics, "to_dict"):
            metrics = metrics.to_dict()
        return {
            "k": self.k,
            "agent_messages": [m.to_dict() for m in self.agent_messages],
            "user_messages": [m.to_dict() for m in self.user_messages],
            "action": action_to_dict(self.action),
            "user_turn": user_turn_to_dict(self.user_turn),
            "generated_html": self.generated_html,
            "metrics": metrics,
            "error": self.error,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TurnRecord":
        return cls(
            k=data["k"],
            agent_messages=[Message.from_dict(m) for m in data.get("agent_messages", [])],
            user_messages=[Message.from_dict(m) for m in data.get("user_messages", [])],
            action=action_from_dict(data.get("action")),
            user_turn=user_turn_from_dict(data.get("user_turn")),
            generated_html=data.get("generated_html"),
            metrics=data.get("metrics"),
            error=data.get("error"),
        )


@dataclass
class SessionTranscript:
    sample_id: str
    mode: str
    turns: list[TurnRecord] = field(default_factory=list)
    termination: Termination | None = None
    sketch_name: str = ""

    def last_valid_html(self) -> str | None:
        for turn in reversed(self.turns):
            if turn.generated_html is not None:
                return turn.generated_html
        return None

    def to_dict(self) -> dict:
        return {
            "sample_id": self.sample_id,
            "mode": self.mode,
            "sketch_name": self.sketch_name,
            "termination": self.termination.value if self.termination else None,
            "turns": [t.to_dict() for t in self.turns],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SessionTranscript":
        return cls(
            sample_id=data["sample_id"],
            mode=data["mode"],
            turns=[TurnRecord.from_dict(t) for t in data.get("turns", [])],
            termination=Termination(data["termination"]) if data.get("termination") else None,
            sketch_name=data.get("sketch_name", ""),
        )


@dataclass(frozen=True)
class SessionSample:
    """Everything a session needs about one benchmark item."""

    sample_id: str
    sketch_png: bytes
    topic: str
    texts: tuple[str, ...]
    reference_html: str
    reference_screenshot_png: bytes
    sketch_name: str = ""
