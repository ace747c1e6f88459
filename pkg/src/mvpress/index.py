"""Flat late-interaction index: a validated corpus searched exhaustively.

Persistence reuses the corpus format plus the JSON metadata sidecar; a flat
index is its corpus. Search is deterministic: scores are exact MaxSim values,
ties order by ascending doc id, and parallel execution splits per query with
results merged in query order.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import ValidationError
from .formats import meta_path_for, read_meta, read_mvec, write_meta, write_mvec
from .model import CompressionMeta, Corpus
from .parallel import ordered_map
from .scoring import MatchRecord, score_prepared
from .trec import Qrels, RunList
from .validation import check_token_matrix


@dataclass(frozen=True)
class FlatIndex:
    """An immutable searchable corpus, optionally with compression metadata."""

    corpus: Corpus
    meta: CompressionMeta | None = None

    def __post_init__(self):
        for doc in self.corpus:
            if doc.token_count == 0:
                raise ValidationError(f"index cannot hold empty document {doc.doc_id!r}")
            if self.meta is not None and doc.token_count != self.meta.budget.m:
                raise ValidationError(
                    f"document {doc.doc_id!r} has {doc.token_count} rows, "
                    f"metadata declares budget {self.meta.budget.m}"
                )

    @property
    def dim(self) -> int:
        return self.corpus.dim

    @property
    def doc_matrices(self) -> tuple[np.ndarray, ...]:
        """Per-document float64 matrices, converted once and cached.

        Construction already guarantees finite entries, a uniform dim, and no
        empty documents, so searches can score these directly instead of
        revalidating the whole corpus for every query.
        """
        mats = getattr(self, "_doc_matrices", None)
        if mats is None:
            mats = tuple(d.embeddings.astype(np.float64) for d in self.corpus)
            object.__setattr__(self, "_doc_matrices", mats)
        return mats


def build_index(corpus: Corpus, meta: CompressionMeta | None = None) -> FlatIndex:
    return FlatIndex(corpus=corpus, meta=meta)


def save_index(index: FlatIndex, path: str | Path) -> None:
    write_mvec(index.corpus, path)
    if index.meta is not None:
        write_meta(index.meta, meta_path_for(path))


def load_index(path: str | Path) -> FlatIndex:
    corpus = read_mvec(path)
    meta_path = meta_path_for(path)
    meta = read_meta(meta_path) if meta_path.exists() else None
    return FlatIndex(corpus=corpus, meta=meta)


def search_one(
    index: FlatIndex,
    query_id: str,
    query,
    k: int,
    capture_matches: bool = False,
    capture_ids: Iterable[str] = (),
) -> tuple[list[tuple[str, float]], list[MatchRecord]]:
    """Top-k (doc_id, score) pairs for one query, best first.

    With capture_matches, match records are emitted for the returned docs (in
    rank order) and for any extra capture_ids present in the index (ascending
    id order), one record per query position each.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    q = check_token_matrix(query, name="query")
    if q.shape[0] < 1:
        raise ValueError("query must have at least one token vector")
    if q.shape[1] != index.dim:
        raise ValueError(f"query dim {q.shape[1]} != index dim {index.dim}")
    mats = index.doc_matrices
    doc_ids = index.corpus.doc_ids
    scored = score_prepared(q, doc_ids, mats, query_id=query_id)
    ranked = sorted(scored, key=lambda s: (-s.score, s.doc_id))[:k]
    pairs = [(s.doc_id, s.score) for s in ranked]
    if not capture_matches:
        return pairs, []
    top_ids = [s.doc_id for s in ranked]
    extra = sorted(set(capture_ids) & set(doc_ids) - set(top_ids))
    mat_by_id = dict(zip(doc_ids, mats))
    matches: list[MatchRecord] = []
    for doc_id in top_ids + extra:
        (scored_doc,) = score_prepared(
            q, [doc_id], [mat_by_id[doc_id]], query_id=query_id, capture_matches=True
        )
        matches.extend(scored_doc.matches)
    return pairs, matches


def search_corpus(
    index: FlatIndex,
    queries: Corpus,
    k: int,
    capture_matches: bool = False,
    capture_relevant: Qrels | None = None,
    threads: int = 1,
    tag: str = "mvpress",
) -> tuple[RunList, list[MatchRecord]]:
    """Search every query document against the index.

    capture_relevant marks extra docs (the qrels-relevant ones per query)
    whose matches are captured even when they miss the top k. Work splits per
    query; results merge in query order, so output never depends on threads.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    for q in queries:
        if q.token_count == 0:
            raise ValueError(f"query {q.doc_id!r} has no token vectors")

    def one(query) -> tuple[str, list[tuple[str, float]], list[MatchRecord]]:
        extra: Iterable[str] = ()
        if capture_relevant is not None:
            extra = [d for d, g in capture_relevant.get(query.doc_id, {}).items() if g >= 1]
        pairs, matches = search_one(
            index,
            query.doc_id,
            query.embeddings,
            k,
            capture_matches=capture_matches,
            capture_ids=extra,
        )
        return query.doc_id, pairs, matches

    rows = ordered_map(one, queries.docs, threads=threads)
    run = RunList.from_scores({qid: pairs for qid, pairs, _ in rows}, tag=tag)
    matches = [m for _, _, ms in rows for m in ms]
    return run, matches
