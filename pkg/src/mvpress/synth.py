"""Synthetic corpus generator for desk-scale end-to-end runs.

Each document is built from k unit-norm concept vectors (one-hot basis rows,
cycling through the embedding dimensions so concepts are mutually orthogonal
across documents whenever dim >= doc_count * k). Every concept appears
`redundancy` times, the copies are shuffled, and isotropic Gaussian noise with
expected norm sigma is added per token. Queries are the clean concept vectors
of one document each; the qrels mark that document relevant at grade 1.

The attention sidecar has a single row and head per document. One designated
copy of each concept (the first after shuffling) splits 0.9 of the mass; the
remaining redundant positions split 0.1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import AttentionSidecar, Corpus, DocumentRecord
from .seeding import derive_seed
from .trec import Qrels

HIGH_ATTENTION_MASS = 0.9


@dataclass(frozen=True)
class SynthSpec:
    """Shape of a generated corpus: counts per document plus noise level."""

    doc_count: int
    concepts: int
    redundancy: int
    sigma: float
    dim: int
    seed: int = 0

    def __post_init__(self):
        for name in ("doc_count", "concepts", "redundancy", "dim"):
            value = getattr(self, name)
            if value < 1:
                raise ValueError(f"{name} must be >= 1, got {value}")
        if not self.sigma >= 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")

    @property
    def tokens_per_doc(self) -> int:
        return self.concepts * self.redundancy


def _id_width(count: int) -> int:
    return max(4, len(str(count)))


def doc_id_for(index: int, doc_count: int) -> str:
    return f"d{index + 1:0{_id_width(doc_count)}d}"


def query_id_for(index: int, doc_count: int) -> str:
    return f"q{index + 1:0{_id_width(doc_count)}d}"


def concept_vectors(spec: SynthSpec, doc_index: int) -> np.ndarray:
    """The k clean unit-norm concepts of one document, shape (k, dim)."""
    out = np.zeros((spec.concepts, spec.dim), dtype=np.float64)
    for c in range(spec.concepts):
        out[c, (doc_index * spec.concepts + c) % spec.dim] = 1.0
    return out


def _build_doc(spec: SynthSpec, doc_index: int) -> tuple[np.ndarray, np.ndarray]:
    """One document's token matrix (n, dim) and attention tensor (1, 1, n)."""
    concepts = concept_vectors(spec, doc_index)
    n = spec.tokens_per_doc
    doc_id = doc_id_for(doc_index, spec.doc_count)
    rng = np.random.default_rng(derive_seed(spec.seed, "doc", doc_id))
    assignment = rng.permutation(np.repeat(np.arange(spec.concepts), spec.redundancy))
    tokens = concepts[assignment]
    if spec.sigma > 0:
        # expected perturbation norm is sigma regardless of dim
        tokens = tokens + (spec.sigma / np.sqrt(spec.dim)) * rng.standard_normal((n, spec.dim))

    marked = n - spec.concepts
    low = (1.0 - HIGH_ATTENTION_MASS) / marked if marked else 0.0
    attention = np.full((1, 1, n), low, dtype=np.float64)
    for c in range(spec.concepts):
        first = int(np.flatnonzero(assignment == c)[0])
        attention[0, 0, first] = HIGH_ATTENTION_MASS / spec.concepts
    return tokens, attention


def generate_synth(spec: SynthSpec) -> tuple[Corpus, Corpus, AttentionSidecar, Qrels]:
    """Build (corpus, queries, attention sidecar, qrels) for the spec."""
    docs = []
    queries = []
    weights = {}
    qrels: Qrels = {}
    for i in range(spec.doc_count):
        did = doc_id_for(i, spec.doc_count)
        qid = query_id_for(i, spec.doc_count)
        tokens, attention = _build_doc(spec, i)
        docs.append(DocumentRecord(doc_id=did, embeddings=tokens))
        weights[did] = attention
        queries.append(DocumentRecord(doc_id=qid, embeddings=concept_vectors(spec, i)))
        qrels[qid] = {did: 1}
    corpus = Corpus.from_docs(docs, dim=spec.dim)
    query_corpus = Corpus.from_docs(queries, dim=spec.dim)
    return corpus, query_corpus, AttentionSidecar(weights=weights), qrels
