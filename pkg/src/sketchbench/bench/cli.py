"""Command-line front-end: run, aggregate, synth, score, serve."""

from __future__ import annotations

import json
import shlex
import sys
from pathlib import Path

import click
import numpy as np

from ..dialogue import ModelParams
from ..geometry import Rect
from ..html import extract_components, extract_text_blocks, page_topic
from ..render import (
    StaticRenderer,
    Viewport,
    static_geometry_provider,
    substitute_placeholders,
)
from ..sketch import SketchRecipe, save_gray_png, synthesize, to_grayscale
from ..taxonomy import ComponentClass
from .aggregate import aggregate as aggregate_runs
from .dataset import load_dataset
from .evaluate import ReferenceContext, SubprocessMetricAdapter, evaluate_turn
from .runner import BackendRegistry, RunConfig, run_benchmark


def _build_renderer(kind: str, browser_ws: str | None, geometry_map: str | None, pool_size: int = 2):
    if kind == "static":
        renderer = StaticRenderer(strict=False)
        if geometry_map:
            mapping = json.loads(Path(geometry_map).read_text())
            for html_path, sidecar_path in mapping.items():
                html = Path(html_path).read_text()
                sidecar = Path(sidecar_path).read_text()
                renderer.register(html, sidecar)
                renderer.register(substitute_placeholders(html), sidecar)
        return renderer
    from ..render.browser import Browser, BrowserPool, CdpRenderer

    browser = Browser.connect(browser_ws) if browser_ws else Browser.launch()
    return CdpRenderer(BrowserPool(browser, size=pool_size))


def _renderer_options(fn):
    fn = click.option(
        "--renderer",
        "renderer_kind",
        type=click.Choice(["static", "browser"]),
        default="static",
        show_default=True,
        help="Static sidecar-driven rendering or a live headless browser.",
    )(fn)
    fn = click.option("--browser-ws", default=None, help="Debugging websocket of a running browser.")(fn)
    fn = click.option(
        "--geometry-map",
        default=None,
        help="JSON file mapping html paths to geometry sidecars (static renderer).",
    )(fn)
    return fn


def _recipe_options(fn):
    fn = click.option("--seed", default=0, show_default=True, type=int)(fn)
    fn = click.option("--canny-low", default=50.0, show_default=True, type=float)(fn)
    fn = click.option("--canny-high", default=150.0, show_default=True, type=float)(fn)
    fn = click.option("--gaussian-sigma", default=1.4, show_default=True, type=float)(fn)
    fn = click.option("--wavelength-factor", default=2.0, show_default=True, type=float)(fn)
    fn = click.option("--amplitude-factor", default=0.35, show_default=True, type=float)(fn)
    fn = click.option("--stroke-divisor", default=12.0, show_default=True, type=float)(fn)
    fn = click.option("--jitter-fraction", default=0.15, show_default=True, type=float)(fn)
    return fn


@click.group()
def main():
    """Sketch-to-code agent evaluation harness."""


@main.command()
@click.option("--root", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--mode", type=click.Choice(["direct", "feedback", "question"]), default="direct", show_default=True)
@click.option("--agent", "agent_backend", required=True, help="Backend id from --backends.")
@click.option("--user", "user_backend", default=None, help="Backend id or 'human' (serve only).")
@click.option("--backends", "backends_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--k-max", default=5, show_default=True, type=int)
@click.option("--subset", default=None, type=int, help="Seeded subsample of this many pages.")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--parallelism", default=1, show_default=True, type=int)
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False))
@click.option("--prompting", type=click.Choice(["direct", "text_augmented"]), default=None)
@click.option("--best-of", default=1, show_default=True, type=int)
@click.option("--viewport-width", default=1280, show_default=True, type=int)
@click.option("--external-metric", default=None, help="Command for the visual-metric adapter.")
@_renderer_options
def run(
    root,
    mode,
    agent_backend,
    user_backend,
    backends_path,
    k_max,
    subset,
    seed,
    parallelism,
    out_dir,
    prompting,
    best_of,
    viewport_width,
    external_metric,
    renderer_kind,
    browser_ws,
    geometry_map,
):
    """Run the benchmark over a dataset."""
    samples = load_dataset(root)
    registry = BackendRegistry.from_file(backends_path)
    renderer = _build_renderer(renderer_kind, browser_ws, geometry_map, pool_size=parallelism)
    external = SubprocessMetricAdapter(shlex.split(external_metric)) if external_metric else None
    cfg = RunConfig(
        mode=mode,
        agent_backend=agent_backend,
        user_backend=user_backend,
        out_dir=Path(out_dir),
        params=ModelParams(best_of=best_of),
        k_max=k_max,
        viewport=Viewport(width=viewport_width),
        parallelism=parallelism,
        seed=seed,
        subset=subset,
        prompting=prompting,
    )
    out = run_benchmark(cfg, samples, registry=registry, renderer=renderer, external_metric=external)
    click.echo(f"run complete: {out}")


@main.command("aggregate")
@click.argument("run_dirs", nargs=-1, required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--out", "out_path", default=None, type=click.Path(dir_okay=False))
@click.option("--metric", default="layout_overall", show_default=True)
def aggregate_cmd(run_dirs, out_path, metric):
    """Fold completed runs into per-turn tables."""
    report = aggregate_runs(list(run_dirs), out_path=out_path)
    click.echo(report.format_table(metric))
    if out_path:
        click.echo(f"report written to {out_path}")


@main.command()
@click.option("--root", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False))
@click.option("--sketch-index", default=1, show_default=True, type=int)
@click.option("--viewport-width", default=1280, show_default=True, type=int)
@_recipe_options
@_renderer_options
def synth(
    root,
    out_dir,
    sketch_index,
    viewport_width,
    seed,
    canny_low,
    canny_high,
    gaussian_sigma,
    wavelength_factor,
    amplitude_factor,
    stroke_divisor,
    jitter_fraction,
    renderer_kind,
    browser_ws,
    geometry_map,
):
    """Generate synthetic wireframe sketches for every page in a dataset.

    With the static renderer a page's geometry comes from an
    ``<id>.boxes`` sidecar next to its html.
    """
    recipe = SketchRecipe(
        seed=seed,
        canny_low=canny_low,
        canny_high=canny_high,
        gaussian_sigma=gaussian_sigma,
        wavelength_factor=wavelength_factor,
        amplitude_factor=amplitude_factor,
        stroke_divisor=stroke_divisor,
        jitter_fraction=jitter_fraction,
    )
    out_path = Path(out_dir)
    out_path.mkdir(parents=True, exist_ok=True)
    renderer = _build_renderer(renderer_kind, browser_ws, geometry_map)
    viewport = Viewport(width=viewport_width)

    samples = load_dataset(root, require_sketches=False)
    for sample in samples:
        html = sample.html_path.read_text()
        substituted = substitute_placeholders(html)
        boxes_sidecar = sample.html_path.with_suffix(".boxes")
        if renderer_kind == "static" and boxes_sidecar.exists():
            result = static_geometry_provider(substituted, boxes_sidecar)
        else:
            result = renderer(substituted, viewport)
        components = extract_components(substituted, result.geometry, result.page)
        screenshot = to_grayscale(result.screenshot)
        sketch = synthesize(
            screenshot,
            list(components.boxes(ComponentClass.TEXT_BLOCK)),
            list(components.boxes(ComponentClass.IMAGE)),
            recipe,
        )
        target = out_path / f"{sample.sample_id}_sketch_{sketch_index}.png"
        save_gray_png(sketch, target, invert=True)
        click.echo(f"wrote {target}")
    (out_path / "sketch_recipe.json").write_text(json.dumps(recipe.to_dict(), indent=2))


@main.command()
@click.argument("ref_html", type=click.Path(exists=True, dir_okay=False))
@click.argument("gen_html", type=click.Path(exists=True, dir_okay=False))
@click.option("--ref-geometry", default=None, type=click.Path(exists=True, dir_okay=False))
@click.option("--gen-geometry", default=None, type=click.Path(exists=True, dir_okay=False))
@click.option("--viewport-width", default=1280, show_default=True, type=int)
@_renderer_options
def score(
    ref_html,
    gen_html,
    ref_geometry,
    gen_geometry,
    viewport_width,
    renderer_kind,
    browser_ws,
    geometry_map,
):
    """Score one generated page against one reference page."""
    viewport = Viewport(width=viewport_width)
    ref_text = Path(ref_html).read_text()
    gen_text = Path(gen_html).read_text()

    if renderer_kind == "static":
        if not (ref_geometry and gen_geometry):
            raise click.UsageError("static scoring needs --ref-geometry and --gen-geometry")
        renderer = StaticRenderer()
        renderer.register(substitute_placeholders(ref_text), Path(ref_geometry).read_text())
        renderer.register(substitute_placeholders(gen_text), Path(gen_geometry).read_text())
    else:
        renderer = _build_renderer(renderer_kind, browser_ws, geometry_map)

    ref_sub = substitute_placeholders(ref_text)
    ref_result = renderer(ref_sub, viewport)
    reference = ReferenceContext(
        sample_id=Path(ref_html).stem,
        boxes=extract_components(ref_sub, ref_result.geometry, ref_result.page),
        page=ref_result.page,
        topic=page_topic(ref_text),
        texts=extract_text_blocks(ref_text).blocks,
        html=ref_text,
        substituted_html=ref_sub,
        screenshot_png=b"",
    )
    metrics = evaluate_turn(reference, gen_text, renderer, viewport)
    click.echo(json.dumps(metrics.to_dict(), indent=2))


@main.command()
@click.option("--root", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--backends", "backends_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--agent", "default_agent", required=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8321, show_default=True, type=int)
@click.option("--k-max", default=5, show_default=True, type=int)
@_renderer_options
def serve(root, backends_path, default_agent, host, port, k_max, renderer_kind, browser_ws, geometry_map):
    """Serve the human-in-the-loop session API."""
    import uvicorn

    from .service import SessionService, create_app

    registry = BackendRegistry.from_file(backends_path)
    renderer = _build_renderer(renderer_kind, browser_ws, geometry_map)
    service = SessionService(root, registry, renderer, default_agent, k_max=k_max)
    uvicorn.run(create_app(service), host=host, port=port)


if __name__ == "__main__":
    main()
