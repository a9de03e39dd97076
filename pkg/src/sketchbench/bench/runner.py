"""Run orchestration across samples, sketches, and backends."""

from __future__ import annotations

import json
import traceback
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from ..dialogue import ModelParams, SessionSample, run_session
from ..dialogue.gateways import HttpChatGateway, MockGateway, ModelGateway
from ..render import StaticRenderer, Viewport
from ..sketch import SketchRecipe
from .dataset import SampleRecord
from .evaluate import ReferenceStore, TurnEvaluator
from .storage import ResultsStore

__all__ = ["RunConfig", "BackendRegistry", "run_benchmark", "session_id_for"]

GatewayFactory = Callable[[SampleRecord], ModelGateway]


@dataclass
class RunConfig:
    mode: str
    agent_backend: str
    user_backend: str | None = None
    out_dir: Path = Path("runs/latest")
    params: ModelParams = field(default_factory=ModelParams)
    user_params: ModelParams | None = None
    k_max: int = 5
    viewport: Viewport = field(default_factory=Viewport)
    sketch_recipe: SketchRecipe | None = None
    parallelism: int = 1
    seed: int = 0
    subset: int | None = None
    prompting: str | None = None

    def __post_init__(self) -> None:
        if self.k_max < 0:
            raise ValueError("k_max must be >= 0")
        if self.parallelism < 1:
            raise ValueError("parallelism must be >= 1")
        self.out_dir = Path(self.out_dir)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "agent_backend": self.agent_backend,
            "user_backend": self.user_backend,
            "out_dir": str(self.out_dir),
            "params": vars(self.params),
            "user_params": vars(self.user_params) if self.user_params else None,
            "k_max": self.k_max,
            "viewport": {
                "width": self.viewport.width,
                "device_scale": self.viewport.device_scale,
                "full_page": self.viewport.full_page,
            },
            "sketch_recipe": self.sketch_recipe.to_dict() if self.sketch_recipe else None,
            "parallelism": self.parallelism,
            "seed": self.seed,
            "subset": self.subset,
            "prompting": self.prompting,
        }


class BackendRegistry:
    """Resolves backend id strings to gateway factories.

    Backends are described in a JSON file::

        {
          "gpt": {"kind": "http", "endpoint": "https://api.openai.com/v1",
                   "model": "gpt-4o", "api_key_env": "OPENAI_API_KEY"},
          "scripted": {"kind": "mock", "script": ["..."],
                        "per_sample": {"a": ["..."]}}
        }

    Credentials are environment-variable names, never literal keys.
    """

    def __init__(self):
        self._factories: dict[str, GatewayFactory] = {}

    def register(self, backend_id: str, factory: GatewayFactory) -> None:
        self._factories[backend_id] = factory

    def register_config(self, backend_id: str, config: dict) -> None:
        kind = config.get("kind")
        if kind == "mock":
            default_script = config.get("script", [])
            per_sample = config.get("per_sample", {})

            def mock_factory(sample: SampleRecord) -> ModelGateway:
                return MockGateway(per_sample.get(sample.sample_id, default_script))

            self.register(backend_id, mock_factory)
        elif kind == "http":
            def http_factory(sample: SampleRecord) -> ModelGateway:
                return HttpChatGateway(
                    endpoint=config["endpoint"],
                    model=config["model"],
                    api_key_env=config.get("api_key_env", "OPENAI_API_KEY"),
                    timeout=config.get("timeout", 120.0),
                    max_retries=config.get("max_retries", 3),
                )

            self.register(backend_id, http_factory)
        else:
            raise ValueError(f"unknown backend kind {kind!r} for {backend_id!r}")

    @classmethod
    def from_file(cls, path: str | Path) -> "BackendRegistry":
        registry = cls()
        for backend_id, config in json.loads(Path(path).read_text()).items():
            registry.register_config(backend_id, config)
        return registry

    def factory(self, backend_id: str) -> GatewayFactory:
        if backend_id not in self._factories:
            raise KeyError(f"backend {backend_id!r} is not registered")
        return self._factories[backend_id]


def session_id_for(sample_id: str, sketch_path: Path, mode: str) -> str:
    return f"{sample_id}__{Path(sketch_path).stem}__{mode}"


def subset_samples(samples: list[SampleRecord], n: int, seed: int) -> list[SampleRecord]:
    """Seeded subsample: the same ids for the same seed on every call."""
    if n >= len(samples):
        return list(samples)
    ordered = sorted(samples, key=lambda s: s.sample_id)
    rng = np.random.default_rng(seed)
    picked = rng.choice(len(ordered), size=n, replace=False)
    return [ordered[i] for i in sorted(picked)]


def run_benchmark(
    cfg: RunConfig,
    samples: list[SampleRecord],
    *,
    agent_factory: GatewayFactory | None = None,
    user_factory: GatewayFactory | None = None,
    registry: BackendRegistry | None = None,
    renderer=None,
    external_metric=None,
) -> Path:
    """Execute one session per (sample, sketch); resumable by session id.

    Gateways come from explicit factories or from the registry via the
    config's backend ids.  The renderer is shared across workers and must
    be internally synchronized (both built-ins are).
    """
    if agent_factory is None:
        agent_factory = (registry or BackendRegistry()).factory(cfg.agent_backend)
    if user_factory is None and cfg.user_backend:
        user_factory = (registry or BackendRegistry()).factory(cfg.user_backend)
    if renderer is None:
        renderer = StaticRenderer(strict=False)

    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "config.json").write_text(json.dumps(cfg.to_dict(), indent=2))

    store = ResultsStore(out_dir)
    done = store.completed_session_ids()
    references = ReferenceStore(out_dir / "reference_cache")

    if cfg.subset is not None:
        samples = subset_samples(samples, cfg.subset, cfg.seed)

    tasks = [
        (sample, sketch)
        for sample in samples
        for sketch in sample.sketch_paths
        if session_id_for(sample.sample_id, sketch, cfg.mode) not in done
    ]

    def execute(task: tuple[SampleRecord, Path]) -> None:
        sample, sketch = task
        session_id = session_id_for(sample.sample_id, sketch, cfg.mode)
        try:
            reference = references.get_or_build(sample, renderer, cfg.viewport)
            session_sample = SessionSample(
                sample_id=sample.sample_id,
                sketch_png=Path(sketch).read_bytes(),
                topic=reference.topic,
                texts=reference.texts,
                reference_html=reference.html,
                reference_screenshot_png=reference.screenshot_png,
                sketch_name=Path(sketch).name,
            )
            evaluator = TurnEvaluator(reference, renderer, cfg.viewport, external_metric)
            transcript = run_session(
                session_sample,
                cfg.mode,
                agent_factory(sample),
                user_factory(sample) if user_factory else None,
                k_max=cfg.k_max,
                params=cfg.params,
                user_params=cfg.user_params,
                evaluate=evaluator,
                prompting=cfg.prompting,
            )
            store.append(
                session_id,
                transcript,
                sample_id=sample.sample_id,
                sketch=str(sketch.name),
                mode=cfg.mode,
                agent_backend=cfg.agent_backend,
            )
        except Exception as exc:
            store.append_failure(
                session_id,
                f"{exc}\n{traceback.format_exc()}",
                sample_id=sample.sample_id,
                sketch=str(Path(sketch).name),
                mode=cfg.mode,
            )

    if cfg.parallelism == 1:
        for task in tasks:
            execute(task)
    else:
        with ThreadPoolExecutor(max_workers=cfg.parallelism) as pool:
            list(pool.map(execute, tasks))
    return out_dir
