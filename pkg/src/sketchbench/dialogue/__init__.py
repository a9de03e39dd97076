"""Multi-turn dialogue protocols between an agent backend and a user."""

from .messages import (
    AgentAction,
    Answers,
    Code,
    Complete,
    Feedback,
    ImageAttachment,
    Invalid,
    Message,
    ModelParams,
    Questions,
    SessionSample,
    SessionTranscript,
    Termination,
    TurnRecord,
    UserTurn,
)
from .prompts import PromptTemplateError, build_prompt, template_text
from .parsing import (
    format_agent_action,
    format_qa_pairs,
    format_questions_block,
    parse_agent_output,
    parse_user_answers,
    parse_user_feedback,
)
from .gateways import (
    GatewayError,
    HttpChatGateway,
    HumanBridgeGateway,
    MockGateway,
    ModelGateway,
    ScriptExhaustedError,
    TransportError,
)
from .session import EvaluationOutcome, run_session

__all__ = [
    "ModelParams",
    "Message",
    "ImageAttachment",
    "AgentAction",
    "Code",
    "Questions",
    "Invalid",
    "UserTurn",
    "Feedback",
    "Answers",
    "Complete",
    "TurnRecord",
    "SessionTranscript",
    "SessionSample",
    "Termination",
    "build_prompt",
    "template_text",
    "PromptTemplateError",
    "parse_agent_output",
    "parse_user_feedback",
    "parse_user_answers",
    "format_agent_action",
    "format_questions_block",
    "format_qa_pairs",
    "ModelGateway",
    "MockGateway",
    "HumanBridgeGateway",
    "HttpChatGateway",
    "GatewayError",
    "TransportError",
    "ScriptExhaustedError",
    "run_session",
    "EvaluationOutcome",
]
