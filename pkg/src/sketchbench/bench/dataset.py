"""Dataset loading.

Layout on disk, one flat directory::

    <root>/<id>.html             reference page
    <root>/<id>.png              reference screenshot
    <root>/<id>_sketch_<j>.png   hand-drawn or synthetic sketches, j >= 1
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

__all__ = ["SampleRecord", "DatasetValidationError", "load_dataset"]

_SKETCH_RE = re.compile(r"^(?P<id>.+)_sketch_(?P<j>\d+)\.png$")


class DatasetValidationError(ValueError):
    def __init__(self, problems: list[str]):
        super().__init__("dataset validation failed:\n  " + "\n  ".join(problems))
        self.problems = problems


@dataclass(frozen=True)
class SampleRecord:
    sample_id: str
    html_path: Path
    screenshot_path: Path
    sketch_paths: tuple[Path, ...]
    annotator_ids: tuple[str, ...] | None = None


def load_dataset(root: str | Path, require_sketches: bool = True) -> list[SampleRecord]:
    """One record per page id, sketches grouped and ordered by index.

    ``require_sketches=False`` admits pages without sketches, which is
    what the sketch synthesizer consumes to create them.
    """
    root = Path(root)
    if not root.is_dir():
        raise DatasetValidationError([f"dataset root {root} is not a directory"])

    html_ids = {p.stem: p for p in root.glob("*.html")}
    sketches: dict[str, list[tuple[int, Path]]] = {}
    for p in root.glob("*.png"):
        m = _SKETCH_RE.match(p.name)
        if m:
            sketches.setdefault(m.group("id"), []).append((int(m.group("j")), p))

    problems = []
    for sketch_id in sorted(sketches):
        if sketch_id not in html_ids:
            problems.append(f"sketch files for '{sketch_id}' have no matching {sketch_id}.html")

    records = []
    for sample_id in sorted(html_ids):
        screenshot = root / f"{sample_id}.png"
        if not screenshot.exists():
            problems.append(f"missing screenshot {screenshot.name} for '{sample_id}'")
            continue
        sample_sketches = tuple(p for _, p in sorted(sketches.get(sample_id, [])))
        if require_sketches and not sample_sketches:
            problems.append(f"no sketches found for '{sample_id}'")
            continue
        records.append(SampleRecord(sample_id, html_ids[sample_id], screenshot, sample_sketches))

    if problems:
        raise DatasetValidationError(problems)
    return records
