"""Retrieval quality metrics over runs and qrels.

Metrics average over the queries present in the run (the run is the unit of
evaluation). A doc is relevant when its grade is >= 1. Reported percentages
truncate rather than round: "reported to N decimals" keeps the leading N
decimal digits of the exact value.
"""

from __future__ import annotations

import math

from .errors import EvaluationError
from .trec import Qrels, RunList


def _truncate(value: float, places: int) -> float:
    scaled = value * 10**places
    nearest = round(scaled)
    # snap values that sit on a decimal boundary up to representation error,
    # so e.g. score == base cannot land a hair below 100.0 and lose a digit
    if math.isclose(scaled, nearest, rel_tol=1e-9, abs_tol=1e-9):
        scaled = nearest
    return math.trunc(scaled) / 10**places


def recall_at_k(run: RunList, qrels: Qrels, k: int) -> float:
    """Mean over queries with >= 1 relevant doc of |relevant in top-k| / |relevant|."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    totals = []
    for qid in run.query_ids:
        relevant = {d for d, g in qrels.get(qid, {}).items() if g >= 1}
        if not relevant:
            continue
        top = {e.doc_id for e in run.for_query(qid)[:k]}
        totals.append(len(top & relevant) / len(relevant))
    if not totals:
        raise EvaluationError("no query in the run has any relevant document")
    return sum(totals) / len(totals)


def ndcg_at_k(run: RunList, qrels: Qrels, k: int) -> float:
    """Mean graded nDCG@k; a query with no relevant docs contributes 0."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not run.query_ids:
        raise EvaluationError("run has no queries")
    totals = []
    for qid in run.query_ids:
        judged = qrels.get(qid, {})
        dcg = 0.0
        for i, entry in enumerate(run.for_query(qid)[:k], start=1):
            grade = judged.get(entry.doc_id, 0)
            dcg += grade / math.log2(i + 1)
        ideal = sorted((g for g in judged.values() if g > 0), reverse=True)[:k]
        idcg = sum(g / math.log2(i + 1) for i, g in enumerate(ideal, start=1))
        totals.append(dcg / idcg if idcg > 0 else 0.0)
    return sum(totals) / len(totals)


def mrr(run: RunList, qrels: Qrels) -> float:
    """Mean reciprocal rank of the first relevant doc; 0 when none retrieved."""
    if not run.query_ids:
        raise EvaluationError("run has no queries")
    totals = []
    for qid in run.query_ids:
        judged = qrels.get(qid, {})
        rr = 0.0
        for entry in run.for_query(qid):
            if judged.get(entry.doc_id, 0) >= 1:
                rr = 1.0 / entry.rank
                break
        totals.append(rr)
    return sum(totals) / len(totals)


def percent_of_baseline(score: float, base: float) -> float:
    """100 * score / base, reported to 1 decimal (truncated)."""
    if base <= 0:
        raise ValueError(f"baseline must be positive, got {base}")
    if score < 0:
        raise ValueError(f"score must be nonnegative, got {score}")
    return _truncate(100.0 * score / base, 1)


def compression_ratio(m: int, avg_tokens: float) -> float:
    """1 - m / avg_tokens, reported to 4 decimals (truncated)."""
    if m < 1:
        raise ValueError(f"budget must be >= 1, got {m}")
    if avg_tokens <= 0:
        raise ValueError(f"avg_tokens must be positive, got {avg_tokens}")
    return _truncate(1.0 - m / avg_tokens, 4)
