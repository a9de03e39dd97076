"""HTTP session service for human-in-the-loop runs.

The browser UI consumes exactly these endpoints:

- ``GET  /samples``                      dataset listing
- ``POST /sessions``                     create a session (JSON body)
- ``GET  /sessions/{id}``                transcript-so-far snapshot
- ``POST /sessions/{id}/user-turn``      human feedback or answers
- ``GET  /sessions/{id}/render/{k}.png`` screenshot of turn k
- ``GET  /sessions/{id}/sketch.png``     the sketch under discussion
- ``GET  /sessions/{id}/reference.png``  reference screenshot (user side)

Each session runs in its own thread; the human replaces the simulated
user through a blocking bridge, so a session sits in ``pending_input``
until the UI posts a user turn.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.responses import Response

from ..dialogue import (
    HumanBridgeGateway,
    ModelParams,
    Questions,
    SessionSample,
    SessionTranscript,
    parse_agent_output,
    run_session,
)
from ..render import Viewport
from .dataset import SampleRecord, load_dataset
from .evaluate import ReferenceStore, TurnEvaluator
from .runner import BackendRegistry

__all__ = ["SessionService", "create_app"]

HUMAN_BACKEND = "human"


@dataclass
class SessionHandle:
    session_id: str
    sample: SampleRecord
    mode: str
    transcript: SessionTranscript
    bridge: HumanBridgeGateway | None
    evaluator: TurnEvaluator
    sketch_png: bytes
    reference_png: bytes
    thread: threading.Thread


class SessionService:
    def __init__(
        self,
        dataset_root: str | Path,
        registry: BackendRegistry,
        renderer,
        default_agent: str,
        k_max: int = 5,
        params: ModelParams | None = None,
        viewport: Viewport | None = None,
        cache_dir: str | Path | None = None,
        input_timeout: float = 3600.0,
    ):
        self.samples = {r.sample_id: r for r in load_dataset(dataset_root)}
        self.registry = registry
        self.renderer = renderer
        self.default_agent = default_agent
        self.k_max = k_max
        self.params = params or ModelParams()
        self.viewport = viewport or Viewport()
        self.references = ReferenceStore(cache_dir or Path(dataset_root) / ".reference_cache")
        self.input_timeout = input_timeout
        self.sessions: dict[str, SessionHandle] = {}
        self._ids = itertools.count(1)
        self._lock = threading.Lock()

    # -- lifecycle -------------------------------------------------------
    def create_session(
        self,
        sample_id: str,
        mode: str,
        agent_backend: str | None = None,
        user_backend: str | None = None,
        sketch_index: int = 0,
    ) -> SessionHandle:
        sample = self.samples.get(sample_id)
        if sample is None:
            raise KeyError(sample_id)
        if not (0 <= sketch_index < len(sample.sketch_paths)):
            raise IndexError(sketch_index)
        if mode not in ("direct", "feedback", "question"):
            raise ValueError(mode)

        reference = self.references.get_or_build(sample, self.renderer, self.viewport)
        sketch_path = sample.sketch_paths[sketch_index]
        session_sample = SessionSample(
            sample_id=sample.sample_id,
            sketch_png=sketch_path.read_bytes(),
            topic=reference.topic,
            texts=reference.texts,
            reference_html=reference.html,
            reference_screenshot_png=reference.screenshot_png,
            sketch_name=sketch_path.name,
        )
        agent = self.registry.factory(agent_backend or self.default_agent)(sample)
        bridge: HumanBridgeGateway | None = None
        user_spec = user_backend or HUMAN_BACKEND
        if mode == "direct":
            user = None
        elif user_spec == HUMAN_BACKEND:
            bridge = HumanBridgeGateway(timeout=self.input_timeout)
            user = bridge
        else:
            user = self.registry.factory(user_spec)(sample)

        evaluator = TurnEvaluator(reference, self.renderer, self.viewport)
        with self._lock:
            session_id = f"session-{next(self._ids)}"
        transcript = SessionTranscript(sample.sample_id, mode, sketch_name=sketch_path.name)
        handle = SessionHandle(
            session_id=session_id,
            sample=sample,
            mode=mode,
            transcript=transcript,
            bridge=bridge,
            evaluator=evaluator,
            sketch_png=session_sample.sketch_png,
            reference_png=reference.screenshot_png,
            thread=threading.Thread(
                target=run_session,
                args=(session_sample, mode, agent, user),
                kwargs={
                    "k_max": self.k_max,
                    "params": self.params,
                    "evaluate": evaluator,
                    "transcript": transcript,
                },
                daemon=True,
            ),
        )
        self.sessions[session_id] = handle
        handle.thread.start()
        return handle

    def get(self, session_id: str) -> SessionHandle:
        handle = self.sessions.get(session_id)
        if handle is None:
            raise KeyError(session_id)
        return handle

    def submit_user_turn(self, session_id: str, text: str) -> None:
        handle = self.get(session_id)
        if handle.bridge is None or not handle.bridge.waiting:
            raise RuntimeError("session is not waiting for user input")
        handle.bridge.submit(text)

    # -- snapshots ---------------------------------------------------------
    def snapshot(self, session_id: str) -> dict:
        handle = self.get(session_id)
        pending = bool(handle.bridge and handle.bridge.waiting)
        turns = []
        for turn in list(handle.transcript.turns):
            action = turn.action
            turns.append(
                {
                    "k": turn.k,
                    "action_kind": type(action).__name__.lower() if action else None,
                    "questions": list(action.items) if isinstance(action, Questions) else None,
                    "has_render": turn.k in handle.evaluator.renders,
                    "metrics": turn.metrics.to_dict()
                    if hasattr(turn.metrics, "to_dict")
                    else turn.metrics,
                    "user_turn": _user_turn_dict(turn.user_turn),
                    "error": turn.error,
                }
            )
        termination = handle.transcript.termination
        return {
            "session_id": session_id,
            "sample_id": handle.sample.sample_id,
            "mode": handle.mode,
            "sketch_name": handle.transcript.sketch_name,
            "turns": turns,
            "termination": termination.value if termination else None,
            "done": termination is not None,
            "pending_input": pending,
            "pending_questions": self._pending_questions(handle) if pending else None,
        }

    @staticmethod
    def _pending_questions(handle: SessionHandle) -> list[str] | None:
        if handle.mode != "question" or not handle.bridge or not handle.bridge.current_messages:
            return None
        action = parse_agent_output(handle.bridge.current_messages[-1].text)
        return list(action.items) if isinstance(action, Questions) else None


def _user_turn_dict(user_turn) -> dict | None:
    from ..dialogue.messages import user_turn_to_dict

    return user_turn_to_dict(user_turn)


def create_app(service: SessionService) -> FastAPI:
    app = FastAPI(title="sketchbench session service")

    @app.get("/samples")
    def list_samples():
        return [
            {
                "sample_id": s.sample_id,
                "sketches": [p.name for p in s.sketch_paths],
            }
            for s in sorted(service.samples.values(), key=lambda s: s.sample_id)
        ]

    @app.post("/sessions")
    def create_session(body: dict):
        try:
            handle = service.create_session(
                sample_id=body["sample_id"],
                mode=body.get("mode", "feedback"),
                agent_backend=body.get("agent_backend"),
                user_backend=body.get("user_backend"),
                sketch_index=int(body.get("sketch_index", 0)),
            )
        except KeyError as exc:
            raise HTTPException(status_code=404, detail=f"unknown sample {exc}")
        except (ValueError, IndexError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {"session_id": handle.session_id}

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        try:
            return service.snapshot(session_id)
        except KeyError:
            raise HTTPException(status_code=404, detail="unknown session")

    @app.post("/sessions/{session_id}/user-turn")
    def user_turn(session_id: str, body: dict):
        text = body.get("text")
        if text is None and "answers" in body:
            text = "\n".join(
                f"{i}. {answer}" for i, answer in enumerate(body["answers"], start=1)
            )
        if not text:
            raise HTTPException(status_code=422, detail="need text or answers")
        try:
            service.submit_user_turn(session_id, text)
        except KeyError:
            raise HTTPException(status_code=404, detail="unknown session")
        except RuntimeError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        return {"accepted": True}

    @app.get("/sessions/{session_id}/render/{k}.png")
    def turn_render(session_id: str, k: int):
        try:
            handle = service.get(session_id)
        except KeyError:
            raise HTTPException(status_code=404, detail="unknown session")
        png = handle.evaluator.renders.get(k)
        if png is None:
            raise HTTPException(status_code=404, detail="no render for that turn")
        return Response(content=png, media_type="image/png")

    @app.get("/sessions/{session_id}/sketch.png")
    def sketch(session_id: str):
        try:
            handle = service.get(session_id)
        except KeyError:
            raise HTTPException(status_code=404, detail="unknown session")
        return Response(content=handle.sketch_png, media_type="image/png")

    @app.get("/sessions/{session_id}/reference.png")
    def reference(session_id: str):
        try:
            handle = service.get(session_id)
        except KeyError:
            raise HTTPException(status_code=404, detail="unknown session")
        return Response(content=handle.reference_png, media_type="image/png")

    return app
