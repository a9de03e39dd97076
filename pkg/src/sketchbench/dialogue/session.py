"""The multi-turn session state machine.

Three protocols share one loop skeleton:

``direct``
    One text-only exchange: the agent generates once from the sketch
    (plus text blocks under text-augmented prompting) and the session
    ends.  ``k_max == 0`` behaves identically in any mode.
``feedback``
    Turn 0 is a text-augmented generation.  Each following round the
    user compares the intended screenshot with the current render,
    answers with one feedback instruction (or the completion sentinel),
    and the agent regenerates with the feedback appended to its chat.
``question``
    Turn 0 is a text-augmented generation.  Each round the agent is
    asked for clarification questions; the user answers them from the
    reference page; the agent regenerates from the accumulated Q/A
    pairs.  An agent that replies with code instead of questions ends
    the session.

Information asymmetry is structural: reference screenshot and HTML only
ever appear in user-side messages.

An invalid generation is retried up to ``params.best_of`` attempts in
total; a turn that stays invalid keeps the previous turn's metrics so
per-turn series have no holes, and the session continues on the last
valid HTML.  Gateway transport failures abort the session with a
partial transcript.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Callable, Protocol, Sequence

from .gateways import GatewayError, ModelGateway
from .messages import (
    Answers,
    Code,
    Complete,
    Feedback,
    Invalid,
    Message,
    ModelParams,
    Questions,
    SessionSample,
    SessionTranscript,
    Termination,
    TurnRecord,
)
from .parsing import parse_agent_output, parse_user_answers, parse_user_feedback
from .prompts import build_prompt

__all__ = ["run_session", "EvaluationOutcome", "Evaluator"]

MODES = ("direct", "feedback", "question")


@dataclass
class EvaluationOutcome:
    """What the bench layer reports back for one generated page."""

    metrics: object | None = None
    screenshot_png: bytes | None = None
    error: str | None = None


class Evaluator(Protocol):
    def __call__(self, html: str, k: int) -> EvaluationOutcome: ...


def _blank_png() -> bytes:
    from PIL import Image

    buf = io.BytesIO()
    Image.new("RGB", (8, 8), (255, 255, 255)).save(buf, format="PNG")
    return buf.getvalue()


class _Abort(Exception):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class _SessionState:
    def __init__(
        self,
        sample: SessionSample,
        agent: ModelGateway,
        user: ModelGateway | None,
        params: ModelParams,
        user_params: ModelParams,
        evaluate: Evaluator | None,
    ):
        self.sample = sample
        self.agent = agent
        self.user = user
        self.params = params
        self.user_params = user_params
        self.evaluate = evaluate
        self.agent_history: list[Message] = []
        self.last_html: str | None = None
        self.last_metrics: object | None = None
        self.last_screenshot: bytes | None = None

    # -- gateway wrappers ----------------------------------------------
    def agent_generate(self, new_messages: Sequence[Message], turn: TurnRecord) -> Code | Invalid:
        """Append messages, sample until a parseable action or the retry
        budget runs out.  The accepted reply joins the history."""
        self.agent_history.extend(new_messages)
        turn.agent_messages.extend(new_messages)
        action: Code | Invalid = Invalid("not sampled")
        raw = ""
        for _ in range(max(1, self.params.best_of)):
            try:
                raw = self.agent.complete(self.agent_history, self.params)
            except GatewayError as exc:
                raise _Abort(str(exc)) from exc
            parsed = parse_agent_output(raw)
            if isinstance(parsed, Code):
                action = parsed
                break
            action = Invalid(f"unparseable generation: {getattr(parsed, 'reason', parsed)}")
        if isinstance(action, Code):
            reply = Message("assistant", raw)
            self.agent_history.append(reply)
            turn.agent_messages.append(reply)
        return action

    def agent_ask(self, history: list[Message], new_messages: Sequence[Message], turn: TurnRecord):
        """Like :meth:`agent_generate` but code replies are allowed and
        question replies are the expected outcome."""
        history.extend(new_messages)
        turn.agent_messages.extend(new_messages)
        action = Invalid("not sampled")
        raw = ""
        for _ in range(max(1, self.params.best_of)):
            try:
                raw = self.agent.complete(history, self.params)
            except GatewayError as exc:
                raise _Abort(str(exc)) from exc
            action = parse_agent_output(raw)
            if not isinstance(action, Invalid):
                break
        if not isinstance(action, Invalid):
            reply = Message("assistant", raw)
            history.append(reply)
            turn.agent_messages.append(reply)
        return action

    def user_complete(self, messages: Sequence[Message], turn: TurnRecord) -> str:
        if self.user is None:
            raise _Abort("no user gateway configured for a multi-turn mode")
        turn.user_messages.extend(messages)
        try:
            raw = self.user.complete(list(messages), self.user_params)
        except GatewayError as exc:
            raise _Abort(str(exc)) from exc
        turn.user_messages.append(Message("assistant", raw))
        return raw

    # -- evaluation ------------------------------------------------------
    def score_turn(self, turn: TurnRecord, action: Code | Invalid) -> None:
        if isinstance(action, Code):
            self.last_html = action.html
            turn.generated_html = action.html
            if self.evaluate is not None:
                outcome = self.evaluate(action.html, turn.k)
                turn.metrics = outcome.metrics
                turn.error = outcome.error
                self.last_metrics = outcome.metrics
                if outcome.screenshot_png is not None:
                    self.last_screenshot = outcome.screenshot_png
        else:
            turn.error = action.reason
            turn.metrics = self.last_metrics


def run_session(
    sample: SessionSample,
    mode: str,
    agent: ModelGateway,
    user: ModelGateway | None = None,
    k_max: int = 5,
    params: ModelParams = ModelParams(),
    *,
    evaluate: Evaluator | None = None,
    prompting: str | None = None,
    user_params: ModelParams | None = None,
    transcript: SessionTranscript | None = None,
) -> SessionTranscript:
    """Run one full session and return its transcript.

    ``prompting`` selects the initial template family for direct mode
    (``"direct"`` or ``"text_augmented"``); multi-turn modes always
    start text-augmented.  Passing a ``transcript`` lets a caller watch
    turns appear as they complete (the service does this); the same
    object is returned.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if k_max < 0:
        raise ValueError("k_max must be >= 0")

    transcript = transcript if transcript is not None else SessionTranscript(
        sample.sample_id, mode, sketch_name=sample.sketch_name
    )
    state = _SessionState(sample, agent, user, params, user_params or params, evaluate)

    agent_ctx = {
        "topic": sample.topic,
        "texts": list(sample.texts),
        "sketch_png": sample.sketch_png,
    }

    initial_family = "direct" if (mode == "direct" and prompting != "text_augmented") else "text_augmented"

    try:
        turn0 = TurnRecord(k=0)
        action = state.agent_generate(
            build_prompt(initial_family, "agent_system", agent_ctx)
            + build_prompt(initial_family, "agent_user", agent_ctx),
            turn0,
        )
        turn0.action = action
        state.score_turn(turn0, action)
        transcript.turns.append(turn0)

        if mode == "direct" or k_max == 0:
            transcript.termination = Termination.BUDGET_EXHAUSTED
            return transcript

        if mode == "feedback":
            _feedback_rounds(state, transcript, k_max, agent_ctx)
        else:
            _question_rounds(state, transcript, k_max, agent_ctx)
    except _Abort as abort:
        transcript.termination = Termination.AGENT_FAILURE
        if transcript.turns:
            last = transcript.turns[-1]
            last.error = last.error or abort.reason
        return transcript

    if transcript.termination is None:
        transcript.termination = Termination.BUDGET_EXHAUSTED
    return transcript


def _feedback_rounds(
    state: _SessionState,
    transcript: SessionTranscript,
    k_max: int,
    agent_ctx: dict,
) -> None:
    sample = state.sample
    for k in range(1, k_max + 1):
        turn = TurnRecord(k=k)
        user_ctx = {
            "reference_screenshot_png": sample.reference_screenshot_png,
            "current_screenshot_png": state.last_screenshot or _blank_png(),
        }
        raw = state.user_complete(build_prompt("feedback", "user_system", user_ctx), turn)
        user_turn = parse_user_feedback(raw)
        turn.user_turn = user_turn
        if isinstance(user_turn, Complete):
            transcript.turns.append(turn)
            transcript.termination = Termination.USER_COMPLETE
            return
        assert isinstance(user_turn, Feedback)
        action = state.agent_generate([Message("user", user_turn.text)], turn)
        turn.action = action
        state.score_turn(turn, action)
        transcript.turns.append(turn)


def _question_rounds(
    state: _SessionState,
    transcript: SessionTranscript,
    k_max: int,
    agent_ctx: dict,
) -> None:
    sample = state.sample
    ask_history: list[Message] = []
    qa_pairs: list[tuple[str, str]] = []

    for k in range(1, k_max + 1):
        turn = TurnRecord(k=k)
        if not ask_history:
            ask_delta = build_prompt("question", "agent_system", agent_ctx) + build_prompt(
                "question", "agent_user", agent_ctx
            )
        else:
            ask_delta = []
        action = state.agent_ask(ask_history, ask_delta, turn)

        if isinstance(action, Code):
            # confident enough to finish: this code is the turn's output
            turn.action = action
            state.score_turn(turn, action)
            transcript.turns.append(turn)
            transcript.termination = Termination.AGENT_COMPLETE
            return
        if isinstance(action, Invalid):
            turn.action = action
            state.score_turn(turn, action)
            transcript.turns.append(turn)
            continue

        assert isinstance(action, Questions)
        turn.action = action

        from .parsing import format_questions_block

        user_ctx = {
            "html_code": sample.reference_html,
            "sketch_png": sample.sketch_png,
            "reference_screenshot_png": sample.reference_screenshot_png,
        }
        prompt = build_prompt("question", "user_system", user_ctx)
        question_block = format_questions_block(action.items)
        ask_message = Message(
            "user",
            prompt[0].text + "\n" + question_block,
            prompt[0].images,
        )
        raw_answers = state.user_complete([ask_message], turn)
        answers = parse_user_answers(raw_answers, len(action.items))
        turn.user_turn = answers
        if len(answers.items) == len(action.items):
            qa_pairs.extend(zip(action.items, answers.items))
        else:
            qa_pairs.append(("\n".join(action.items), answers.items[0]))
        ask_history.append(Message("user", raw_answers))

        regen_ctx = dict(agent_ctx, qa_pairs=list(qa_pairs))
        regen_messages = build_prompt("question", "agent_system", regen_ctx) + build_prompt(
            "question", "agent_regen", regen_ctx
        )
        regen = _stateless_generate(state, regen_messages, turn)
        state.score_turn(turn, regen)
        transcript.turns.append(turn)


def _stateless_generate(
    state: _SessionState, messages: list[Message], turn: TurnRecord
) -> Code | Invalid:
    """One-shot generation outside the running chat (question-mode
    regeneration builds its full prompt from accumulated Q/A pairs)."""
    turn.agent_messages.extend(messages)
    action: Code | Invalid = Invalid("not sampled")
    for _ in range(max(1, state.params.best_of)):
        try:
            raw = state.agent.complete(messages, state.params)
        except GatewayError as exc:
            raise _Abort(str(exc)) from exc
        parsed = parse_agent_output(raw)
        if isinstance(parsed, Code):
            action = parsed
            turn.agent_messages.append(Message("assistant", raw))
            break
        action = Invalid(f"unparseable generation: {getattr(parsed, 'reason', parsed)}")
    return action
