"""Model backends: HTTP chat-completion client, scripted mock, human bridge."""

from __future__ import annotations

import base64
import os
import queue
import threading
import time
from typing import Protocol, Sequence

from .messages import Message, ModelParams

__all__ = [
    "ModelGateway",
    "GatewayError",
    "TransportError",
    "ScriptExhaustedError",
    "HttpChatGateway",
    "MockGateway",
    "HumanBridgeGateway",
]


class GatewayError(RuntimeError):
    pass


class TransportError(GatewayError):
    pass


class ScriptExhaustedError(GatewayError):
    pass


class ModelGateway(Protocol):
    def complete(self, messages: Sequence[Message], params: ModelParams) -> str: ...


class MockGateway:
    """Replays canned responses keyed by call index; thread-safe."""

    def __init__(self, script: Sequence[str], name: str = "mock"):
        self.name = name
        self._script = list(script)
        self._index = 0
        self._lock = threading.Lock()
        self.calls: list[list[Message]] = []

    def complete(self, messages: Sequence[Message], params: ModelParams) -> str:
        with self._lock:
            self.calls.append(list(messages))
            if self._index >= len(self._script):
                raise ScriptExhaustedError(
                    f"mock {self.name!r} exhausted after {len(self._script)} calls"
                )
            reply = self._script[self._index]
            self._index += 1
        return reply


class HumanBridgeGateway:
    """Blocks each completion until a human submission arrives.

    The session service calls :meth:`submit` when the UI posts a user
    turn; the session thread sits in :meth:`complete` meanwhile.
    """

    def __init__(self, timeout: float | None = None):
        self._queue: queue.Queue[str] = queue.Queue()
        self._waiting = threading.Event()
        self.timeout = timeout
        self.current_messages: list[Message] | None = None

    @property
    def waiting(self) -> bool:
        return self._waiting.is_set()

    def submit(self, text: str) -> None:
        self._queue.put(text)

    def complete(self, messages: Sequence[Message], params: ModelParams) -> str:
        self.current_messages = list(messages)
        self._waiting.set()
        try:
            return self._queue.get(timeout=self.timeout)
        except queue.Empty:
            raise TransportError("no human input arrived in time") from None
        finally:
            self._waiting.clear()
            self.current_messages = None


class HttpChatGateway:
    """Client for an OpenAI-style chat-completions endpoint.

    Credentials come from the environment only (``api_key_env`` names the
    variable).  Transient failures (429, 5xx, transport errors) retry
    with exponential backoff; anything else raises immediately.
    """

    RETRYABLE = {408, 409, 429, 500, 502, 503, 504}

    def __init__(
        self,
        endpoint: str,
        model: str,
        api_key_env: str = "OPENAI_API_KEY",
        timeout: float = 120.0,
        max_retries: int = 3,
        backoff_base: float = 1.0,
        client=None,
    ):
        self.endpoint = endpoint.rstrip("/")
        self.model = model
        self.api_key_env = api_key_env
        self.timeout = timeout
        self.max_retries = max_retries
        self.backoff_base = backoff_base
        self._client = client

    def _headers(self) -> dict:
        headers = {"Content-Type": "application/json"}
        key = os.environ.get(self.api_key_env, "")
        if key:
            headers["Authorization"] = f"Bearer {key}"
        return headers

    @staticmethod
    def _encode_message(message: Message) -> dict:
        if not message.images:
            return {"role": message.role, "content": message.text}
        parts: list[dict] = []
        if message.text:
            parts.append({"type": "text", "text": message.text})
        for img in message.images:
            b64 = base64.b64encode(img.png).decode("ascii")
            parts.append(
                {"type": "image_url", "image_url": {"url": f"data:image/png;base64,{b64}"}}
            )
        return {"role": message.role, "content": parts}

    def _payload(self, messages: Sequence[Message], params: ModelParams) -> dict:
        payload = {
            "model": self.model,
            "messages": [self._encode_message(m) for m in messages],
            "temperature": params.temperature,
            "top_p": params.top_p,
            "max_tokens": params.max_tokens,
            "frequency_penalty": params.frequency_penalty,
            "presence_penalty": params.presence_penalty,
        }
        if params.repetition_penalty:
            payload["repetition_penalty"] = params.repetition_penalty
        return payload

    def complete(self, messages: Sequence[Message], params: ModelParams) -> str:
        import httpx

        url = f"{self.endpoint}/chat/completions"
        payload = self._payload(messages, params)
        client = self._client or httpx
        last_error: Exception | None = None
        for attempt in range(self.max_retries + 1):
            if attempt:
                time.sleep(self.backoff_base * (2 ** (attempt - 1)))
            try:
                response = client.post(
                    url, json=payload, headers=self._headers(), timeout=self.timeout
                )
            except httpx.HTTPError as exc:
                last_error = exc
                continue
            if response.status_code in self.RETRYABLE:
                last_error = TransportError(f"HTTP {response.status_code}: {response.text[:200]}")
                continue
            if response.status_code != 200:
                raise TransportError(f"HTTP {response.status_code}: {response.text[:500]}")
            data = response.json()
            try:
                return data["choices"][0]["message"]["content"] or ""
            except (KeyError, IndexError, TypeError) as exc:
                raise TransportError(f"malformed completion payload: {exc}") from exc
        raise TransportError(f"request failed after {self.max_retries + 1} attempts: {last_error}")
