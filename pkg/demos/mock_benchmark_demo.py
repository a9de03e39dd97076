"""Run a fully hermetic benchmark: mock backends, sidecar geometry.

Two pages, feedback protocol, five-round budget.  One simulated user
improves nothing and exhausts the budget; the other accepts the second
generation with the completion sentinel.
"""

import tempfile
from pathlib import Path

from sketchbench.bench import RunConfig, aggregate, load_dataset, run_benchmark
from sketchbench.bench.storage import ResultsStore
from sketchbench.dialogue import MockGateway
from sketchbench.render import StaticRenderer, substitute_placeholders

REF_HTML = """<html><head><title>Demo Page</title></head><body>
<p>Alpha block</p>
<img src="rick.jpg">
</body></html>"""

GEN_HTML = REF_HTML.replace("Demo Page", "Generated")

REF_SIDECAR = """page\t0\t0\t100\t100
html[0]\t0\t0\t100\t100
html[0]/head[0]\t0\t0\t0\t0
html[0]/head[0]/title[0]\t0\t0\t0\t0
html[0]/body[0]\t0\t0\t100\t100
html[0]/body[0]/p[0]\t0\t0\t10\t10
html[0]/body[0]/img[0]\t0\t20\t10\t25
"""

GEN_SIDECAR = REF_SIDECAR.replace("0\t0\t10\t10", "5\t0\t15\t10")

work = Path(tempfile.mkdtemp(prefix="sketchbench-demo"))
data = work / "data"
data.mkdir()

from PIL import Image

for sample_id in ("page-a", "page-b"):
    (data / f"{sample_id}.html").write_text(REF_HTML)
    Image.new("RGB", (4, 4), "white").save(data / f"{sample_id}.png")
    Image.new("RGB", (4, 4), "white").save(data / f"{sample_id}_sketch_1.png")

renderer = StaticRenderer(strict=False)
renderer.register(substitute_placeholders(REF_HTML), REF_SIDECAR)
renderer.register(substitute_placeholders(GEN_HTML), GEN_SIDECAR)

code_reply = f"```\n{GEN_HTML}\n```"
user_scripts = {
    "page-a": ['Feedback: """nudge the text left"""' for _ in range(5)],
    "page-b": ['Feedback: """closer"""', 'Feedback: """\nGeneration Complete\n"""'],
}

cfg = RunConfig(
    mode="feedback",
    agent_backend="demo-agent",
    user_backend="demo-user",
    out_dir=work / "run",
    k_max=5,
)
out = run_benchmark(
    cfg,
    load_dataset(data),
    agent_factory=lambda s: MockGateway([code_reply] * 6),
    user_factory=lambda s: MockGateway(user_scripts[s.sample_id]),
    renderer=renderer,
)

print(f"run directory: {out}")
for record in ResultsStore(out).load_records():
    transcript = record["transcript"]
    ks = [t["k"] for t in transcript["turns"]]
    print(f"  {record['session_id']}: turns k={ks}, termination={transcript['termination']}")

report = aggregate([out])
print("\nper-turn layout similarity (percent):")
print(report.format_table("layout_overall"))
