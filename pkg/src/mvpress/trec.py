"""TREC-style run and qrels files.

Run lines: ``qid Q0 docid rank score tag`` with scores printed at 6 decimal
places and ranks starting at 1. Qrels lines: ``qid 0 docid grade``. Fields are
whitespace-separated; blank lines are skipped; anything else malformed raises
ParseError with the line number.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple

from .errors import ParseError, ValidationError

Qrels = dict[str, dict[str, int]]

SCORE_FORMAT = "{:.6f}"


class RunEntry(NamedTuple):
    doc_id: str
    rank: int
    score: float


@dataclass(frozen=True)
class RunList:
    """Ranked retrieval results per query.

    Per query: ranks are contiguous from 1 and scores non-increasing. Built
    via from_scores, score ties order by ascending doc id.
    """

    results: Mapping[str, tuple[RunEntry, ...]]
    tag: str = "mvpress"

    def __post_init__(self):
        frozen: dict[str, tuple[RunEntry, ...]] = {}
        for qid, entries in dict(self.results).items():
            entries = tuple(entries)
            seen_docs = set()
            for i, entry in enumerate(entries):
                if entry.rank != i + 1:
                    raise ValidationError(
                        f"query {qid!r}: rank {entry.rank} at position {i}, expected {i + 1}"
                    )
                if i and entry.score > entries[i - 1].score:
                    raise ValidationError(f"query {qid!r}: scores increase at rank {entry.rank}")
                if entry.doc_id in seen_docs:
                    raise ValidationError(f"query {qid!r}: duplicate doc {entry.doc_id!r}")
                seen_docs.add(entry.doc_id)
            frozen[qid] = entries
        object.__setattr__(self, "results", frozen)

    @classmethod
    def from_scores(
        cls,
        scores: Mapping[str, Iterable[tuple[str, float]]],
        tag: str = "mvpress",
    ) -> "RunList":
        """Build a run from raw (doc_id, score) pairs, sorting each query by
        descending score with ties broken by ascending doc id."""
        results = {}
        for qid, pairs in scores.items():
            ranked = sorted(pairs, key=lambda p: (-p[1], p[0]))
            results[qid] = tuple(
                RunEntry(doc_id=d, rank=i + 1, score=s) for i, (d, s) in enumerate(ranked)
            )
        return cls(results=results, tag=tag)

    @property
    def query_ids(self) -> tuple[str, ...]:
        return tuple(self.results)

    def for_query(self, qid: str) -> tuple[RunEntry, ...]:
        return self.results.get(qid, ())


def write_run(run: RunList, path: str | Path) -> None:
    lines = []
    for qid, entries in run.results.items():
        for e in entries:
            score = SCORE_FORMAT.format(e.score)
            lines.append(f"{qid} Q0 {e.doc_id} {e.rank} {score} {run.tag}")
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def read_run(path: str | Path) -> RunList:
    results: dict[str, list[RunEntry]] = {}
    tag = "mvpress"
    with open(path, "r", encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 6:
                raise ParseError(str(path), line_no, f"expected 6 fields, got {len(parts)}")
            qid, _q0, doc_id, rank_s, score_s, tag = parts
            try:
                rank = int(rank_s)
            except ValueError:
                raise ParseError(str(path), line_no, f"bad rank {rank_s!r}") from None
            try:
                score = float(score_s)
            except ValueError:
                raise ParseError(str(path), line_no, f"bad score {score_s!r}") from None
            results.setdefault(qid, []).append(RunEntry(doc_id=doc_id, rank=rank, score=score))
    return RunList(results={q: tuple(v) for q, v in results.items()}, tag=tag)


def write_qrels(qrels: Qrels, path: str | Path) -> None:
    lines = []
    for qid, judged in qrels.items():
        for doc_id, grade in judged.items():
            lines.append(f"{qid} 0 {doc_id} {grade}")
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def read_qrels(path: str | Path) -> Qrels:
    qrels: Qrels = {}
    with open(path, "r", encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 4:
                raise ParseError(str(path), line_no, f"expected 4 fields, got {len(parts)}")
            qid, _iter, doc_id, grade_s = parts
            try:
                grade = int(grade_s)
            except ValueError:
                raise ParseError(str(path), line_no, f"bad grade {grade_s!r}") from None
            if grade < 0:
                raise ParseError(str(path), line_no, f"negative grade {grade}")
            qrels.setdefault(qid, {})[doc_id] = grade
    return qrels
