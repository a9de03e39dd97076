"""Shared hermetic fixtures: a tiny dataset whose pages reproduce the
hand-computed two-class layout score of 5/9 through the full pipeline."""

from __future__ import annotations

import io
from pathlib import Path

from PIL import Image

from sketchbench.render import StaticRenderer, substitute_placeholders

REF_HTML = """<html><head><title>Fixture Page</title></head><body>
<p>Alpha block</p>
<img src="rick.jpg">
</body></html>"""

GEN_HTML = """<html><head><title>Generated Page</title></head><body>
<p>Alpha block</p>
<img src="rick.jpg">
</body></html>"""

# text: ref (0,0,10,10) vs gen (5,0,15,10) -> IoU 1/3, combined area 200
# image: both (0,20,10,25) -> IoU 1, combined area 100
# Sim = (200/300)(1/3) + (100/300)(1) = 5/9
REF_SIDECAR = """\
page\t0\t0\t100\t100
html[0]\t0\t0\t100\t100
html[0]/head[0]\t0\t0\t0\t0
html[0]/head[0]/title[0]\t0\t0\t0\t0
html[0]/body[0]\t0\t0\t100\t100
html[0]/body[0]/p[0]\t0\t0\t10\t10
html[0]/body[0]/img[0]\t0\t20\t10\t25
"""

GEN_SIDECAR = """\
page\t0\t0\t100\t100
html[0]\t0\t0\t100\t100
html[0]/head[0]\t0\t0\t0\t0
html[0]/head[0]/title[0]\t0\t0\t0\t0
html[0]/body[0]\t0\t0\t100\t100
html[0]/body[0]/p[0]\t5\t0\t15\t10
html[0]/body[0]/img[0]\t0\t20\t10\t25
"""

GEN_REPLY = f"```\n{GEN_HTML}\n```"

EXPECTED_OVERALL = 5.0 / 9.0


def tiny_png() -> bytes:
    buf = io.BytesIO()
    Image.new("RGB", (4, 4), (250, 250, 250)).save(buf, format="PNG")
    return buf.getvalue()


def build_renderer(strict: bool = False) -> StaticRenderer:
    renderer = StaticRenderer(strict=strict)
    renderer.register(substitute_placeholders(REF_HTML), REF_SIDECAR)
    renderer.register(substitute_placeholders(GEN_HTML), GEN_SIDECAR)
    return renderer


def make_dataset(root: Path, sample_ids=("a", "b"), sketches_per_sample=1) -> Path:
    root.mkdir(parents=True, exist_ok=True)
    png = tiny_png()
    for sample_id in sample_ids:
        (root / f"{sample_id}.html").write_text(REF_HTML)
        (root / f"{sample_id}.png").write_bytes(png)
        for j in range(1, sketches_per_sample + 1):
            (root / f"{sample_id}_sketch_{j}.png").write_bytes(png)
    return root
