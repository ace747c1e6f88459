"""Match log files: one JSON object per line, one line per match record.

Keys are fixed as qid, qpos, did, dpos, sim so that writing is deterministic
and reading a written file reproduces it byte for byte.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable

from .errors import ParseError
from .scoring import MatchRecord


def format_match_record(record: MatchRecord) -> str:
    payload = {
        "qid": record.query_id,
        "qpos": record.query_pos,
        "did": record.doc_id,
        "dpos": record.doc_pos,
        "sim": record.similarity,
    }
    return json.dumps(payload, separators=(",", ":"))


def write_match_log(records: Iterable[MatchRecord], path: str | Path) -> None:
    lines = [format_match_record(r) for r in records]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def read_match_log(path: str | Path) -> list[MatchRecord]:
    records = []
    with open(path, "r", encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(str(path), line_no, f"invalid JSON: {exc.msg}") from None
            if not isinstance(obj, dict):
                raise ParseError(str(path), line_no, "record must be a JSON object")
            try:
                record = MatchRecord(
                    query_id=obj["qid"],
                    query_pos=int(obj["qpos"]),
                    doc_id=obj["did"],
                    doc_pos=int(obj["dpos"]),
                    similarity=float(obj["sim"]),
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(str(path), line_no, f"bad record: {exc}") from None
            if not isinstance(record.query_id, str) or not isinstance(record.doc_id, str):
                raise ParseError(str(path), line_no, "qid and did must be strings")
            if record.query_pos < 0 or record.doc_pos < 0:
                raise ParseError(str(path), line_no, "positions must be nonnegative")
            records.append(record)
    return records
