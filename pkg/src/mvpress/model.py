"""Core domain types: documents, corpora, attention sidecars, budgets, metadata.

All types are immutable after construction. Embedding payloads are stored as
read-only float32 arrays (the storage dtype); every computation that consumes
them widens to float64 first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterator, Mapping

import numpy as np

from .errors import ValidationError
from .validation import check_doc_id

COMPRESSION_METHODS = ("seq-resize", "mem-tok", "h-pool", "agc")


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(arr)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class Budget:
    """Vector budget: total output rows m, of which `protected` pass through."""

    m: int
    protected: int = 0

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"budget m must be >= 1, got {self.m}")
        if not 0 <= self.protected < self.m:
            raise ValueError(
                f"protected count must be in [0, m), got {self.protected} with m={self.m}"
            )


@dataclass(frozen=True)
class DocumentRecord:
    """One document: an id and its (n, h) token-embedding matrix.

    n == 0 is legal here (the storage format allows empty documents); the
    compressors and the index reject such records at their own boundaries.
    """

    doc_id: str
    embeddings: np.ndarray

    def __post_init__(self):
        check_doc_id(self.doc_id)
        arr = np.asarray(self.embeddings, dtype=np.float32)
        if arr.ndim != 2 or arr.shape[1] < 1:
            raise ValueError(
                f"embeddings must be (n, h) with h >= 1, got shape {arr.shape}"
            )
        if not np.all(np.isfinite(arr)):
            raise ValidationError(f"document {self.doc_id!r} has non-finite embeddings")
        object.__setattr__(self, "embeddings", _freeze(arr))

    @property
    def token_count(self) -> int:
        return self.embeddings.shape[0]

    @property
    def dim(self) -> int:
        return self.embeddings.shape[1]


@dataclass(frozen=True)
class Corpus:
    """An ordered collection of documents with unique ids and a shared dim."""

    docs: tuple[DocumentRecord, ...]
    dim: int
    _by_id: Mapping[str, int] = field(repr=False, compare=False, default=None)

    def __post_init__(self):
        docs = tuple(self.docs)
        if self.dim < 1:
            raise ValueError(f"corpus dim must be >= 1, got {self.dim}")
        by_id: dict[str, int] = {}
        for pos, doc in enumerate(docs):
            if doc.dim != self.dim:
                raise ValidationError(
                    f"document {doc.doc_id!r} has dim {doc.dim}, corpus dim is {self.dim}"
                )
            if doc.doc_id in by_id:
                raise ValidationError(f"duplicate document id {doc.doc_id!r}")
            by_id[doc.doc_id] = pos
        object.__setattr__(self, "docs", docs)
        object.__setattr__(self, "_by_id", by_id)

    @classmethod
    def from_docs(cls, docs, dim: int | None = None) -> "Corpus":
        docs = tuple(docs)
        if dim is None:
            if not docs:
                raise ValueError("dim is required for an empty corpus")
            dim = docs[0].dim
        return cls(docs=docs, dim=dim)

    def __len__(self) -> int:
        return len(self.docs)

    def __iter__(self) -> Iterator[DocumentRecord]:
        return iter(self.docs)

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self._by_id

    def get(self, doc_id: str) -> DocumentRecord:
        try:
            return self.docs[self._by_id[doc_id]]
        except KeyError:
            raise KeyError(f"unknown document id {doc_id!r}") from None

    @property
    def doc_ids(self) -> tuple[str, ...]:
        return tuple(d.doc_id for d in self.docs)

    @property
    def total_tokens(self) -> int:
        return sum(d.token_count for d in self.docs)

    @property
    def avg_tokens(self) -> float:
        if not self.docs:
            raise ValueError("average token count is undefined for an empty corpus")
        return self.total_tokens / len(self.docs)


@dataclass(frozen=True)
class AttentionSidecar:
    """Per-document attention tensors keyed by doc id.

    Each tensor has shape (rows, heads, n): one weight row per kept attention
    row and head over the document's n token positions. Weights are finite and
    nonnegative; rows need not be normalized.
    """

    weights: Mapping[str, np.ndarray]

    def __post_init__(self):
        frozen: dict[str, np.ndarray] = {}
        for doc_id, w in dict(self.weights).items():
            check_doc_id(doc_id)
            arr = np.asarray(w, dtype=np.float32)
            if arr.ndim != 3 or min(arr.shape) < 1:
                raise ValueError(
                    f"attention for {doc_id!r} must be (rows, heads, n), got {arr.shape}"
                )
            if not np.all(np.isfinite(arr)):
                raise ValidationError(f"attention for {doc_id!r} has non-finite weights")
            if np.any(arr < 0):
                raise ValidationError(f"attention for {doc_id!r} has negative weights")
            frozen[doc_id] = _freeze(arr)
        object.__setattr__(self, "weights", frozen)

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self.weights

    def __len__(self) -> int:
        return len(self.weights)

    def for_doc(self, doc_id: str) -> np.ndarray:
        try:
            return self.weights[doc_id]
        except KeyError:
            raise ValueError(f"no attention weights for document {doc_id!r}") from None

    def check_aligned(self, corpus: Corpus) -> None:
        """Require a weight tensor for every corpus doc, covering its n tokens."""
        for doc in corpus:
            att = self.for_doc(doc.doc_id)
            if att.shape[2] != doc.token_count:
                raise ValidationError(
                    f"attention for {doc.doc_id!r} covers {att.shape[2]} positions, "
                    f"document has {doc.token_count} tokens"
                )


@dataclass(frozen=True)
class CompressionMeta:
    """How a compressed corpus was produced: method, budget, source stats."""

    method: str
    budget: Budget
    source_fingerprint: str
    avg_source_tokens: float
    ratio: float
    variant: Mapping[str, Any] | None = None

    def __post_init__(self):
        if self.method not in COMPRESSION_METHODS:
            raise ValueError(
                f"method must be one of {COMPRESSION_METHODS}, got {self.method!r}"
            )
        if self.avg_source_tokens <= 0:
            raise ValueError("avg_source_tokens must be positive")
        if self.variant is not None:
            object.__setattr__(self, "variant", dict(self.variant))

    def to_json_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "method": self.method,
            "budget": {"m": self.budget.m, "protected": self.budget.protected},
            "source_fingerprint": self.source_fingerprint,
            "avg_source_tokens": self.avg_source_tokens,
            "ratio": self.ratio,
        }
        if self.variant is not None:
            out["variant"] = dict(self.variant)
        return out

    @classmethod
    def from_json_dict(cls, d: Mapping[str, Any]) -> "CompressionMeta":
        try:
            budget = Budget(m=int(d["budget"]["m"]), protected=int(d["budget"]["protected"]))
            return cls(
                method=d["method"],
                budget=budget,
                source_fingerprint=d["source_fingerprint"],
                avg_source_tokens=float(d["avg_source_tokens"]),
                ratio=float(d["ratio"]),
                variant=d.get("variant"),
            )
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed compression metadata: {exc}") from exc
