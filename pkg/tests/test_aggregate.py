import json

import pytest

from sketchbench.bench import TurnMetrics, aggregate
from sketchbench.bench.storage import ResultsStore
from sketchbench.dialogue.messages import SessionTranscript, Termination, TurnRecord


def make_transcript(sample_id, scores, sketch_name="s1"):
    turns = []
    for k, score in enumerate(scores):
        metrics = None
        if score is not None:
            metrics = TurnMetrics(
                k=k,
                layout_overall=score,
                text_iou=score,
                image_iou=None,
                other_iou=None,
                per_class={"text_block": score},
            )
        turns.append(TurnRecord(k=k, metrics=metrics, generated_html="<html></html>"))
    return SessionTranscript(
        sample_id=sample_id,
        mode="feedback",
        turns=turns,
        termination=Termination.BUDGET_EXHAUSTED,
        sketch_name=sketch_name,
    )


def write_run(tmp_path, name, sessions, model="mock-agent"):
    run_dir = tmp_path / name
    run_dir.mkdir(parents=True, exist_ok=True)
    (run_dir / "config.json").write_text(json.dumps({"agent_backend": model, "mode": "feedback"}))
    store = ResultsStore(run_dir)
    for session_id, sample_id, scores, sketch in sessions:
        store.append(
            session_id,
            make_transcript(sample_id, scores, sketch),
            sample_id=sample_id,
            sketch=sketch,
            mode="feedback",
        )
    return run_dir


class TestAggregation:
    def test_improvement_arithmetic(self, tmp_path):
        run = write_run(
            tmp_path, "run", [("x__s1__feedback", "x", [0.10, 0.12, 0.15], "s1")]
        )
        report = aggregate([run])
        improv = report.improvement["mock-agent"]["layout_overall"]
        assert improv["avg"] == pytest.approx(0.025)
        assert improv["n"] == 2

    def test_per_turn_means(self, tmp_path):
        run = write_run(
            tmp_path,
            "run",
            [
                ("x__s1__feedback", "x", [0.1, 0.2], "s1"),
                ("y__s1__feedback", "y", [0.3, 0.4], "s1"),
            ],
        )
        report = aggregate([run])
        means = report.per_turn["mock-agent"]["layout_overall"]
        assert means[0] == pytest.approx(0.2)
        assert means[1] == pytest.approx(0.3)

    def test_fluctuation_max_minus_min(self, tmp_path):
        run = write_run(
            tmp_path,
            "run",
            [
                ("p__s1__feedback", "p", [0.1, 0.20], "s1"),
                ("p__s2__feedback", "p", [0.1, 0.26], "s2"),
                ("q__s1__feedback", "q", [0.5, 0.5], "s1"),  # single sketch: excluded
            ],
        )
        report = aggregate([run])
        fluct = report.fluctuation["mock-agent"]["layout_overall"]
        assert fluct["per_page"] == {"p": pytest.approx(0.06)}
        assert fluct["mean"] == pytest.approx(0.06)

    def test_failed_turns_excluded_not_zero_filled(self, tmp_path):
        run = write_run(
            tmp_path, "run", [("x__s1__feedback", "x", [0.1, None, 0.3], "s1")]
        )
        report = aggregate([run])
        means = report.per_turn["mock-agent"]["layout_overall"]
        assert set(means) == {0, 2}
        # no k=1 metric, so no k->k-1 deltas at all
        assert "layout_overall" not in report.improvement.get("mock-agent", {})

    def test_order_invariance(self, tmp_path):
        sessions = [
            ("x__s1__feedback", "x", [0.1, 0.2], "s1"),
            ("y__s1__feedback", "y", [0.3, 0.5], "s1"),
        ]
        a = aggregate([write_run(tmp_path, "run_a", sessions)])
        b = aggregate([write_run(tmp_path, "run_b", list(reversed(sessions)))])
        assert a.per_turn == b.per_turn
        assert a.improvement == b.improvement

    def test_empty_run_errors(self, tmp_path):
        empty = tmp_path / "empty"
        empty.mkdir()
        (empty / "config.json").write_text(json.dumps({"agent_backend": "m"}))
        with pytest.raises(ValueError):
            aggregate([empty])

    def test_report_file_and_table(self, tmp_path):
        run = write_run(
            tmp_path, "run", [("x__s1__feedback", "x", [0.10, 0.12, 0.15], "s1")]
        )
        out = tmp_path / "report.json"
        report = aggregate([run], out_path=out)
        data = json.loads(out.read_text())
        assert data["improvement"]["mock-agent"]["layout_overall"]["avg"] == pytest.approx(0.025)
        table = report.format_table()
        assert "mock-agent" in table
        assert "k=0" in table and "k=2" in table
        assert "12.00" in table  # k=1 mean shown in percent


class TestPersistenceRoundTrip:
    def test_transcript_round_trip_through_store(self, tmp_path):
        run_dir = tmp_path / "run"
        store = ResultsStore(run_dir)
        transcript = make_transcript("x", [0.1, 0.2])
        store.append("x__s1__feedback", transcript, sample_id="x", sketch="s1", mode="feedback")
        (record, restored) = ResultsStore(run_dir).load_transcripts()[0]
        assert record["session_id"] == "x__s1__feedback"
        assert restored.sample_id == transcript.sample_id
        assert restored.termination is transcript.termination
        assert [t.k for t in restored.turns] == [t.k for t in transcript.turns]
        assert restored.turns[1].metrics["layout_overall"] == pytest.approx(0.2)
