"""Corpus-level compression: run one compressor over every document, in
parallel, and record how the output was produced."""

from __future__ import annotations

import numpy as np

from .compressors.base import TokenCompressor
from .formats import corpus_fingerprint
from .metrics import compression_ratio
from .model import AttentionSidecar, Budget, CompressionMeta, Corpus, DocumentRecord
from .parallel import ordered_map


def _pad_doc(doc: DocumentRecord, rows: int) -> DocumentRecord:
    padded = np.zeros((rows, doc.dim), dtype=np.float32)
    padded[: doc.token_count] = doc.embeddings
    return DocumentRecord(doc_id=doc.doc_id, embeddings=padded)


def _pad_attention(att: np.ndarray, rows: int) -> np.ndarray:
    padded = np.zeros(att.shape[:2] + (rows,), dtype=np.float32)
    padded[:, :, : att.shape[2]] = att
    return padded


def compress_corpus(
    corpus: Corpus,
    compressor: TokenCompressor,
    attention: AttentionSidecar | None = None,
    threads: int = 1,
    pad_short: str | None = None,
) -> tuple[Corpus, CompressionMeta]:
    """Compress every document; returns the new corpus and its metadata.

    pad_short="zero" appends zero token rows (and zero attention columns) to
    documents shorter than the compressor's minimum length; by default such
    documents are an error. Empty documents are always rejected. Documents
    failing preconditions are reported together, by id.
    """
    if pad_short not in (None, "zero"):
        raise ValueError(f"pad_short must be None or 'zero', got {pad_short!r}")
    if len(corpus) == 0:
        raise ValueError("cannot compress an empty corpus")
    compressor.fit()

    empty = [d.doc_id for d in corpus if d.token_count == 0]
    if empty:
        raise ValueError(f"cannot compress empty documents: {', '.join(empty)}")
    needed = compressor.min_tokens
    short = [d.doc_id for d in corpus if d.token_count < needed]
    if short and pad_short is None:
        raise ValueError(
            f"documents shorter than the budget ({needed} rows): {', '.join(short)}; "
            "re-run with zero padding to keep them"
        )

    if compressor.needs_attention():
        if attention is None:
            raise ValueError(f"{compressor.method} requires an attention sidecar")
        attention.check_aligned(corpus)

    short_set = set(short)

    def one(doc: DocumentRecord) -> DocumentRecord:
        att = attention
        if doc.doc_id in short_set:
            doc = _pad_doc(doc, needed)
            if att is not None and compressor.needs_attention():
                att = AttentionSidecar(
                    weights={doc.doc_id: _pad_attention(att.for_doc(doc.doc_id), needed)}
                )
        compressed = compressor.compress_record(doc, att)
        return DocumentRecord(doc_id=doc.doc_id, embeddings=np.asarray(compressed, dtype=np.float32))

    docs = ordered_map(one, corpus.docs, threads=threads)
    out = Corpus(docs=tuple(docs), dim=corpus.dim)
    budget = Budget(m=compressor.output_rows, protected=compressor.protected_count)
    avg = corpus.avg_tokens
    meta = CompressionMeta(
        method=compressor.method,
        budget=budget,
        source_fingerprint=corpus_fingerprint(corpus),
        avg_source_tokens=avg,
        ratio=compression_ratio(budget.m, avg),
        variant=compressor.variant_params(),
    )
    return out, meta
