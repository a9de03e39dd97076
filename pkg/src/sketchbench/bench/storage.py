"""Result persistence: line-delimited JSON, one session per line.

Append-friendly and resumable: a rerun reads the ids already present
and skips them.  Records are schema-versioned so older runs stay
readable if fields evolve.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path

from ..dialogue.messages import SessionTranscript

__all__ = ["ResultsStore", "SCHEMA_VERSION"]

SCHEMA_VERSION = 1
RESULTS_FILE = "transcripts.jsonl"


class ResultsStore:
    def __init__(self, run_dir: str | Path):
        self.run_dir = Path(run_dir)
        self.run_dir.mkdir(parents=True, exist_ok=True)
        self.path = self.run_dir / RESULTS_FILE
        self._lock = threading.Lock()

    def completed_session_ids(self) -> set[str]:
        return {record["session_id"] for record in self.load_records()}

    def load_records(self) -> list[dict]:
        if not self.path.exists():
            return []
        records = []
        with self.path.open() as fh:
            for line in fh:
                line = line.strip()
                if line:
                    records.append(json.loads(line))
        return records

    def append(self, session_id: str, transcript: SessionTranscript, **extra) -> None:
        record = {
            "schema_version": SCHEMA_VERSION,
            "session_id": session_id,
            **extra,
            "transcript": transcript.to_dict(),
        }
        line = json.dumps(record, ensure_ascii=False)
        with self._lock, self.path.open("a") as fh:
            fh.write(line + "\n")

    def append_failure(self, session_id: str, error: str, **extra) -> None:
        record = {
            "schema_version": SCHEMA_VERSION,
            "session_id": session_id,
            "failed": True,
            "error": error,
            **extra,
        }
        with self._lock, self.path.open("a") as fh:
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")

    def load_transcripts(self) -> list[tuple[dict, SessionTranscript]]:
        out = []
        for record in self.load_records():
            if record.get("failed"):
                continue
            out.append((record, SessionTranscript.from_dict(record["transcript"])))
        return out
