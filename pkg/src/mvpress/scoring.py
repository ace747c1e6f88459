"""Late-interaction MaxSim scoring.

The score of a query against a document is the sum over query token positions
of the maximum dot product against any document vector. Inputs may be stored
as float32; every similarity and every accumulation here happens in float64,
and the outer sum always runs in ascending query position order, so scalar and
blocked paths agree bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .model import Corpus, DocumentRecord
from .validation import check_token_matrix


class MatchRecord(NamedTuple):
    """One query-position-level match: which doc vector won, and its score."""

    query_id: str
    query_pos: int
    doc_id: str
    doc_pos: int
    similarity: float


@dataclass(frozen=True)
class ScoredDoc:
    doc_id: str
    score: float
    matches: tuple[MatchRecord, ...] | None = None


def _similarities(query: np.ndarray, doc: np.ndarray) -> np.ndarray:
    """(n_q, n_d) float64 dot-product matrix.

    Computed with numpy's own einsum kernel rather than a BLAS matmul: the
    batched form here and the scalar form ``einsum("h,h->", q_i, c_j)`` run
    the identical inner reduction, so blocked scoring is bitwise equal to
    one-pair-at-a-time scoring on any build. A BLAS GEMM gives no such
    guarantee (its per-element results can differ from a vector dot by an
    ulp depending on the kernel chosen for the shape).
    """
    return np.einsum("ih,jh->ij", query, doc)


def _accumulate(maxima: np.ndarray) -> float:
    # fixed order: ascending query position, one add per position
    total = 0.0
    for v in maxima:
        total += float(v)
    return total


def _check_pair(query: np.ndarray, doc: np.ndarray, doc_label: str) -> tuple[np.ndarray, np.ndarray]:
    q = check_token_matrix(query, name="query")
    d = check_token_matrix(doc, name=doc_label)
    if q.shape[0] < 1:
        raise ValueError("query must have at least one token vector")
    if d.shape[0] < 1:
        raise ValueError(f"{doc_label} has no token vectors")
    if q.shape[1] != d.shape[1]:
        raise ValueError(f"query dim {q.shape[1]} != {doc_label} dim {d.shape[1]}")
    return q, d


def maxsim_score(query: np.ndarray, doc: np.ndarray) -> float:
    """MaxSim score of one query matrix against one document matrix."""
    q, d = _check_pair(query, doc, "doc")
    sims = _similarities(q, d)
    return _accumulate(sims.max(axis=1))


def _score_one(q: np.ndarray, d: np.ndarray, query_id: str, doc_id: str) -> ScoredDoc:
    """Score a validated float64 pair, capturing one match per query position."""
    sims = _similarities(q, d)
    winners = sims.argmax(axis=1)  # first occurrence, i.e. lowest doc position
    maxima = sims[np.arange(sims.shape[0]), winners]
    matches = tuple(
        MatchRecord(
            query_id=query_id,
            query_pos=i,
            doc_id=doc_id,
            doc_pos=int(winners[i]),
            similarity=float(maxima[i]),
        )
        for i in range(sims.shape[0])
    )
    return ScoredDoc(doc_id=doc_id, score=_accumulate(maxima), matches=matches)


def maxsim_with_matches(
    query: np.ndarray, doc: np.ndarray, query_id: str, doc_id: str
) -> ScoredDoc:
    """MaxSim score plus one MatchRecord per query position.

    Ties in the per-position argmax resolve to the lowest document position.
    The score equals the sum of the recorded similarities exactly.
    """
    q, d = _check_pair(query, doc, f"doc {doc_id!r}")
    return _score_one(q, d, query_id, doc_id)


def score_prepared(
    q: np.ndarray,
    doc_ids: Sequence[str],
    doc_matrices: Sequence[np.ndarray],
    query_id: str = "",
    capture_matches: bool = False,
) -> list[ScoredDoc]:
    """Score an already-validated query against already-validated documents.

    Every input must be a finite float64 matrix of the same width; callers
    that hold raw inputs go through score_block instead. The index search
    path uses this to convert each document exactly once per index rather
    than once per query.
    """
    out = []
    for doc_id, d in zip(doc_ids, doc_matrices):
        if capture_matches:
            out.append(_score_one(q, d, query_id, doc_id))
        else:
            sims = _similarities(q, d)
            out.append(ScoredDoc(doc_id=doc_id, score=_accumulate(sims.max(axis=1))))
    return out


def score_block(
    query: np.ndarray,
    docs: Sequence[DocumentRecord],
    query_id: str = "",
    capture_matches: bool = False,
) -> list[ScoredDoc]:
    """Score one query against a block of documents, in document order.

    The whole block is validated before any document is scored, so a dim
    mismatch anywhere aborts the block with no partial result. Each document
    is scored with the same kernel as maxsim_score; blocked results are
    bitwise equal to one-at-a-time scoring.
    """
    q = check_token_matrix(query, name="query")
    if q.shape[0] < 1:
        raise ValueError("query must have at least one token vector")
    mats = []
    for doc in docs:
        d = check_token_matrix(doc.embeddings, name=f"doc {doc.doc_id!r}")
        if d.shape[0] < 1:
            raise ValueError(f"doc {doc.doc_id!r} has no token vectors")
        if d.shape[1] != q.shape[1]:
            raise ValueError(f"query dim {q.shape[1]} != doc {doc.doc_id!r} dim {d.shape[1]}")
        mats.append(d)
    return score_prepared(
        q,
        [doc.doc_id for doc in docs],
        mats,
        query_id=query_id,
        capture_matches=capture_matches,
    )


def normalize_rows(x: np.ndarray) -> np.ndarray:
    """L2-normalize rows; zero-norm rows stay zero. Returns float64."""
    arr = check_token_matrix(x, name="x")
    norms = np.linalg.norm(arr, axis=1, keepdims=True)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(norms > 0, arr / norms, 0.0)
    return out


def normalize_corpus(corpus: Corpus) -> Corpus:
    """Per-row normalized copy of a corpus (the optional load-time convention)."""
    docs = tuple(
        DocumentRecord(doc_id=d.doc_id, embeddings=normalize_rows(d.embeddings))
        if d.token_count
        else d
        for d in corpus
    )
    return Corpus(docs=docs, dim=corpus.dim)
