"""Aggregation of completed runs into per-turn report tables."""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .storage import ResultsStore

__all__ = ["AggregateReport", "aggregate", "METRIC_KEYS"]

METRIC_KEYS = ("layout_overall", "text_iou", "image_iou", "other_iou", "external_visual")


@dataclass
class AggregateReport:
    """Per-model, per-turn means plus improvement and fluctuation stats.

    ``improvement`` holds the mean and standard deviation of per-round
    deltas (score at k minus score at k-1, over sessions where both
    turns have valid metrics).  ``fluctuation`` is the spread (max minus
    min) of final-turn scores across different sketches of the same
    page, averaged per model.
    """

    per_turn: dict = field(default_factory=dict)  # model -> metric -> {k: mean}
    improvement: dict = field(default_factory=dict)  # model -> metric -> {avg, std, n}
    fluctuation: dict = field(default_factory=dict)  # model -> {metric, per_page, mean}
    session_counts: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "per_turn": self.per_turn,
            "improvement": self.improvement,
            "fluctuation": self.fluctuation,
            "session_counts": self.session_counts,
        }

    def format_table(self, metric: str = "layout_overall") -> str:
        """Plain-text table: one row per model, scores in percent."""
        ks = sorted({int(k) for m in self.per_turn.values() for k in m.get(metric, {})})
        header = ["model"] + [f"k={k}" for k in ks] + ["improv avg", "improv std"]
        rows = [header]
        for model in sorted(self.per_turn):
            turn_means = self.per_turn[model].get(metric, {})
            improv = self.improvement.get(model, {}).get(metric, {})
            row = [model]
            for k in ks:
                value = turn_means.get(k, turn_means.get(str(k)))
                row.append(f"{value * 100:.2f}" if value is not None else "-")
            row.append(f"{improv['avg'] * 100:.2f}" if improv.get("avg") is not None else "-")
            row.append(f"{improv['std'] * 100:.2f}" if improv.get("std") is not None else "-")
            rows.append(row)
        widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
        lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)) for row in rows]
        lines.insert(1, "-" * len(lines[0]))
        return "\n".join(lines)


def _turn_series(transcript_dict: dict) -> dict[int, dict]:
    """k -> metrics dict for turns with valid metrics."""
    series = {}
    for turn in transcript_dict.get("turns", []):
        metrics = turn.get("metrics")
        if metrics is not None:
            series[turn["k"]] = metrics
    return series


def aggregate(run_dirs: list[str | Path], out_path: str | Path | None = None) -> AggregateReport:
    """Fold one or more run directories into a report.

    Order-invariant over sessions.  Failed turns are excluded from the
    means rather than zero-filled.
    """
    run_dirs = [Path(d) for d in run_dirs]
    if not run_dirs:
        raise ValueError("no run directories given")

    per_turn_values: dict = defaultdict(lambda: defaultdict(lambda: defaultdict(list)))
    deltas: dict = defaultdict(lambda: defaultdict(list))
    finals: dict = defaultdict(lambda: defaultdict(lambda: defaultdict(list)))
    counts: dict = defaultdict(int)

    any_records = False
    for run_dir in run_dirs:
        config_path = run_dir / "config.json"
        model = "unknown"
        if config_path.exists():
            model = json.loads(config_path.read_text()).get("agent_backend", "unknown")
        store = ResultsStore(run_dir)
        for record in store.load_records():
            if record.get("failed"):
                continue
            any_records = True
            counts[model] += 1
            transcript = record["transcript"]
            series = _turn_series(transcript)
            for metric in METRIC_KEYS:
                by_k = {
                    k: m.get(metric) for k, m in series.items() if m.get(metric) is not None
                }
                for k, value in by_k.items():
                    per_turn_values[model][metric][k].append(value)
                for k in sorted(by_k):
                    if k - 1 in by_k:
                        deltas[model][metric].append(by_k[k] - by_k[k - 1])
                if by_k:
                    final_k = max(by_k)
                    finals[model][metric][record.get("sample_id", transcript["sample_id"])].append(
                        by_k[final_k]
                    )

    if not any_records:
        raise ValueError("no completed sessions found in the given runs")

    report = AggregateReport(session_counts=dict(counts))
    for model, metrics in per_turn_values.items():
        report.per_turn[model] = {
            metric: {k: float(np.mean(vals)) for k, vals in sorted(by_k.items())}
            for metric, by_k in metrics.items()
        }
    for model, metrics in deltas.items():
        report.improvement[model] = {
            metric: {
                "avg": float(np.mean(vals)),
                "std": float(np.std(vals)),
                "n": len(vals),
            }
            for metric, vals in metrics.items()
            if vals
        }
    for model, metrics in finals.items():
        fluct: dict = {}
        for metric, per_page in metrics.items():
            spreads = {
                page: float(max(scores) - min(scores))
                for page, scores in per_page.items()
                if len(scores) >= 2
            }
            if spreads:
                fluct[metric] = {
                    "per_page": spreads,
                    "mean": float(np.mean(list(spreads.values()))),
                }
        report.fluctuation[model] = fluct

    if out_path is not None:
        Path(out_path).write_text(json.dumps(report.to_dict(), indent=2))
    return report
