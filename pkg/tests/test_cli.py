import json

import numpy as np
import pytest
from click.testing import CliRunner
from PIL import Image

from sketchbench.bench.cli import main
from sketchbench.render import write_geometry_sidecar
from sketchbench.geometry import Rect

from bench_fixtures import (
    EXPECTED_OVERALL,
    GEN_HTML,
    GEN_REPLY,
    GEN_SIDECAR,
    REF_HTML,
    REF_SIDECAR,
    make_dataset,
)


@pytest.fixture()
def runner():
    return CliRunner()


def write_fixture_pages(tmp_path):
    ref = tmp_path / "ref.html"
    gen = tmp_path / "gen.html"
    ref.write_text(REF_HTML)
    gen.write_text(GEN_HTML)
    ref_geom = tmp_path / "ref.boxes"
    gen_geom = tmp_path / "gen.boxes"
    ref_geom.write_text(REF_SIDECAR)
    gen_geom.write_text(GEN_SIDECAR)
    return ref, gen, ref_geom, gen_geom


class TestScoreCommand:
    def test_static_scoring_reproduces_worked_example(self, runner, tmp_path):
        ref, gen, ref_geom, gen_geom = write_fixture_pages(tmp_path)
        result = runner.invoke(
            main,
            [
                "score",
                str(ref),
                str(gen),
                "--ref-geometry",
                str(ref_geom),
                "--gen-geometry",
                str(gen_geom),
            ],
        )
        assert result.exit_code == 0, result.output
        metrics = json.loads(result.output)
        assert metrics["layout_overall"] == pytest.approx(EXPECTED_OVERALL, abs=1e-6)
        assert metrics["text_iou"] == pytest.approx(1 / 3, abs=1e-9)

    def test_static_without_sidecars_is_usage_error(self, runner, tmp_path):
        ref, gen, _, _ = write_fixture_pages(tmp_path)
        result = runner.invoke(main, ["score", str(ref), str(gen)])
        assert result.exit_code != 0


class TestRunAndAggregateCommands:
    def test_mock_run_then_aggregate(self, runner, tmp_path):
        root = make_dataset(tmp_path / "data")
        backends = tmp_path / "backends.json"
        backends.write_text(
            json.dumps(
                {
                    "agent": {"kind": "mock", "script": [GEN_REPLY] * 6},
                    "user": {
                        "kind": "mock",
                        "script": ['Feedback: """tweak"""', 'Feedback: """\nGeneration Complete\n"""'],
                    },
                }
            )
        )
        geometry_map = tmp_path / "geom.json"
        ref, gen, ref_geom, gen_geom = write_fixture_pages(tmp_path)
        mapping = {str(root / "a.html"): str(ref_geom), str(root / "b.html"): str(ref_geom)}
        mapping[str(gen)] = str(gen_geom)
        geometry_map.write_text(json.dumps(mapping))

        out_dir = tmp_path / "run"
        result = runner.invoke(
            main,
            [
                "run",
                "--root",
                str(root),
                "--mode",
                "feedback",
                "--agent",
                "agent",
                "--user",
                "user",
                "--backends",
                str(backends),
                "--k-max",
                "2",
                "--out",
                str(out_dir),
                "--geometry-map",
                str(geometry_map),
            ],
        )
        assert result.exit_code == 0, result.output
        assert (out_dir / "transcripts.jsonl").exists()

        agg = runner.invoke(main, ["aggregate", str(out_dir)])
        assert agg.exit_code == 0, agg.output
        assert "agent" in agg.output
        assert "k=0" in agg.output


class TestSynthCommand:
    def test_synth_from_sidecar_geometry(self, runner, tmp_path):
        root = tmp_path / "data"
        root.mkdir()
        html = "<html><body><p>words here</p><img src=\"rick.jpg\"></body></html>"
        (root / "a.html").write_text(html)
        Image.new("RGB", (200, 120), (240, 240, 240)).save(root / "a.png")
        sidecar = write_geometry_sidecar(
            {
                "html[0]": Rect(0, 0, 200, 120),
                "html[0]/body[0]": Rect(0, 0, 200, 120),
                "html[0]/body[0]/p[0]": Rect(10, 10, 190, 40),
                "html[0]/body[0]/img[0]": Rect(20, 50, 120, 110),
            },
            page=Rect(0, 0, 200, 120),
        )
        (root / "a.boxes").write_text(sidecar)

        out_dir = tmp_path / "sketches"
        result = runner.invoke(
            main,
            ["synth", "--root", str(root), "--out", str(out_dir), "--seed", "7"],
        )
        assert result.exit_code == 0, result.output
        sketch_path = out_dir / "a_sketch_1.png"
        assert sketch_path.exists()
        sketch = np.asarray(Image.open(sketch_path))
        assert sketch.shape == (120, 200)
        assert (sketch == 0).any() and (sketch == 255).any()
        assert json.loads((out_dir / "sketch_recipe.json").read_text())["seed"] == 7

    def test_synth_is_deterministic(self, runner, tmp_path):
        root = tmp_path / "data"
        root.mkdir()
        (root / "a.html").write_text("<html><body><p>yo</p></body></html>")
        Image.new("RGB", (64, 64), (250, 250, 250)).save(root / "a.png")
        (root / "a.boxes").write_text(
            write_geometry_sidecar(
                {"html[0]/body[0]/p[0]": Rect(8, 8, 56, 30)}, page=Rect(0, 0, 64, 64)
            )
        )
        out_a = tmp_path / "s1"
        out_b = tmp_path / "s2"
        for out in (out_a, out_b):
            result = runner.invoke(
                main, ["synth", "--root", str(root), "--out", str(out), "--seed", "3"]
            )
            assert result.exit_code == 0, result.output
        assert (out_a / "a_sketch_1.png").read_bytes() == (out_b / "a_sketch_1.png").read_bytes()
