"""Index-utilization analytics: per-position matching strength, pairwise
cosine structure, evenness statistics, and correlation against them.

The match-strength aggregations consume MatchRecord lists; restricting the
records to relevant query-document pairs is the caller's job.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy import stats

from .model import Corpus
from .scoring import MatchRecord, normalize_rows


def matching_strength(
    matches: Sequence[MatchRecord], doc_len: int, mode: str = "global"
) -> np.ndarray:
    """Per-document-position strength vector of length doc_len.

    mode="global": strength[j] is the sum of similarities of records at doc
    position j divided by the total record count, so the vector sums to the
    mean match similarity. mode="per-query": each query position's records
    are first normalized by that position's record count, and the resulting
    per-position vectors are averaged over the query positions present (the
    two readings of the same figure; global is the default).
    """
    if doc_len < 1:
        raise ValueError(f"doc_len must be >= 1, got {doc_len}")
    if mode not in ("global", "per-query"):
        raise ValueError(f"mode must be 'global' or 'per-query', got {mode!r}")
    out = np.zeros(doc_len, dtype=np.float64)
    if not matches:
        return out
    for r in matches:
        if not 0 <= r.doc_pos < doc_len:
            raise ValueError(f"doc position {r.doc_pos} out of range for doc_len {doc_len}")
    if mode == "global":
        for r in matches:
            out[r.doc_pos] += r.similarity
        return out / len(matches)
    by_qpos: dict[int, list[MatchRecord]] = {}
    for r in matches:
        by_qpos.setdefault(r.query_pos, []).append(r)
    for records in by_qpos.values():
        vec = np.zeros(doc_len, dtype=np.float64)
        for r in records:
            vec[r.doc_pos] += r.similarity
        out += vec / len(records)
    return out / len(by_qpos)


def strength_by_position_pair(matches: Sequence[MatchRecord], doc_len: int) -> np.ndarray:
    """(query positions, doc_len) strength matrix, globally normalized.

    Cell (p, j) sums the similarities of records at query position p and doc
    position j, divided by the total record count; summing over p recovers
    matching_strength(..., mode="global"). The flattened matrix is the sample
    multiset for the evenness statistics.
    """
    if doc_len < 1:
        raise ValueError(f"doc_len must be >= 1, got {doc_len}")
    if not matches:
        return np.zeros((0, doc_len), dtype=np.float64)
    n_qpos = max(r.query_pos for r in matches) + 1
    out = np.zeros((n_qpos, doc_len), dtype=np.float64)
    for r in matches:
        if not 0 <= r.doc_pos < doc_len:
            raise ValueError(f"doc position {r.doc_pos} out of range for doc_len {doc_len}")
        out[r.query_pos, r.doc_pos] += r.similarity
    return out / len(matches)


def utilization_fraction(matches: Sequence[MatchRecord], total_vectors: int) -> float:
    """Distinct (doc_id, doc_pos) pairs matched, over all vectors stored."""
    if total_vectors < 1:
        raise ValueError(f"total_vectors must be >= 1, got {total_vectors}")
    active = {(r.doc_id, r.doc_pos) for r in matches}
    if len(active) > total_vectors:
        raise ValueError("match log references more vectors than the index holds")
    return len(active) / total_vectors


def mean_pairwise_cosine(corpus: Corpus) -> np.ndarray:
    """(m, m) cosine-similarity matrix averaged over documents.

    Requires every document to have the same row count m. Cosines involving
    a zero-norm row are 0 by convention; diagonal entries for nonzero rows
    are exactly 1 per document before averaging.
    """
    if len(corpus) == 0:
        raise ValueError("corpus is empty")
    counts = {doc.token_count for doc in corpus}
    if len(counts) != 1:
        raise ValueError(f"documents have mixed row counts {sorted(counts)}")
    m = counts.pop()
    if m < 1:
        raise ValueError("documents have no rows")
    acc = np.zeros((m, m), dtype=np.float64)
    for doc in corpus:
        emb = doc.embeddings.astype(np.float64)
        unit = normalize_rows(emb)
        cos = np.clip(unit @ unit.T, -1.0, 1.0)
        nonzero = np.linalg.norm(emb, axis=1) > 0
        np.fill_diagonal(cos, np.where(nonzero, 1.0, 0.0))
        acc += cos
    return acc / len(corpus)


# evenness statistics ---------------------------------------------------------

@dataclass(frozen=True)
class EvennessReport:
    cv: float
    gini: float
    sample_count: int


def cv(samples: Sequence[float]) -> float:
    """Coefficient of variation in percent: population std over mean * 100."""
    arr = np.asarray(samples, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError("samples must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(arr)):
        raise ValueError("samples must be finite")
    mean = float(arr.mean())
    if mean == 0:
        raise ValueError("cv is undefined for zero-mean samples")
    return float(arr.std()) / mean * 100.0


def gini(samples: Sequence[float]) -> float:
    """Gini coefficient of nonnegative samples; 0 for an all-zero input."""
    arr = np.asarray(samples, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError("samples must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(arr)):
        raise ValueError("samples must be finite")
    if np.any(arr < 0):
        raise ValueError("gini requires nonnegative samples")
    total = float(arr.sum())
    if total == 0:
        return 0.0
    ordered = np.sort(arr)
    n = ordered.size
    ranks = np.arange(1, n + 1, dtype=np.float64)
    return float(2.0 * np.sum(ranks * ordered) / (n * total) - (n + 1) / n)


def evenness_report(matches: Sequence[MatchRecord], doc_len: int) -> EvennessReport:
    """CV and Gini over the flattened (query position, doc position) strength
    matrix: the sample unit is the per-pair strength."""
    pairs = strength_by_position_pair(matches, doc_len)
    samples = pairs.ravel()
    if samples.size == 0:
        raise ValueError("no match records to analyze")
    return EvennessReport(cv=cv(samples), gini=gini(samples), sample_count=int(samples.size))


# correlation -----------------------------------------------------------------

def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Pearson correlation coefficient."""
    r, _ = pearson_test(x, y)
    return r


def pearson_test(x: Sequence[float], y: Sequence[float]) -> tuple[float, float]:
    """Pearson r and its two-sided p-value (t distribution, n-2 df)."""
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    if xa.ndim != 1 or xa.shape != ya.shape:
        raise ValueError("x and y must be 1-D sequences of equal length")
    n = xa.size
    if n < 2:
        raise ValueError("pearson needs at least 2 points")
    if not (np.all(np.isfinite(xa)) and np.all(np.isfinite(ya))):
        raise ValueError("inputs must be finite")
    dx = xa - xa.mean()
    dy = ya - ya.mean()
    sx = float(np.sqrt(np.sum(dx * dx)))
    sy = float(np.sqrt(np.sum(dy * dy)))
    if sx == 0 or sy == 0:
        raise ValueError("pearson is undefined for zero-variance input")
    r = float(np.sum(dx * dy)) / (sx * sy)
    r = max(-1.0, min(1.0, r))
    if n < 3 or 1.0 - r * r <= 0.0:
        return r, 0.0
    t = r * np.sqrt((n - 2) / (1.0 - r * r))
    p = 2.0 * float(stats.t.sf(abs(t), n - 2))
    return r, p


def correlation_table(
    metric_series: Mapping[str, Sequence[float]],
    evenness_series: Mapping[str, Sequence[float]],
) -> dict[str, dict[str, dict[str, float]]]:
    """Pearson r and p of each retrieval metric against each inverse evenness
    statistic (1 / CV, 1 / Gini): the hyperbolic-relationship table."""
    table: dict[str, dict[str, dict[str, float]]] = {}
    for metric_name, values in metric_series.items():
        row = {}
        for even_name, evens in evenness_series.items():
            ev = np.asarray(evens, dtype=np.float64)
            if np.any(ev <= 0):
                raise ValueError(f"evenness series {even_name!r} must be positive to invert")
            r, p = pearson_test(values, 1.0 / ev)
            row[even_name] = {"r": r, "p": p}
        table[metric_name] = row
    return table
