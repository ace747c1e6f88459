"""Attention-guided clustering.

Pipeline per document: average the universal-query attention rows into a
per-token saliency score, keep the top-m tokens as centroids, hard-assign
every token to its highest-cosine centroid, then aggregate each cluster as a
saliency-weighted average. Three ablation switches unplug one stage each:
selection="random" replaces the top-m choice, aggregation="unweighted" drops
the saliency weights, clustering=False skips assignment and returns the
selected rows themselves.
"""

from __future__ import annotations

import numpy as np

from ..model import AttentionSidecar, DocumentRecord
from ..scoring import normalize_rows
from ..seeding import derive_seed
from ..validation import check_attention, check_budget, check_token_matrix
from .base import ClusterPartition, TokenCompressor

SELECTION_MODES = ("attention", "random")
AGGREGATION_MODES = ("weighted", "unweighted")


def saliency_scores(attention: np.ndarray) -> np.ndarray:
    """Per-token saliency: the mean over all (row, head) attention slices.

    attention has shape (rows, heads, n); the result has shape (n,). Scores
    are not renormalized, downstream use depends only on ratios.
    """
    att = check_attention(attention)
    return att.mean(axis=(0, 1))


def select_centroids(
    saliency: np.ndarray, z: np.ndarray, m: int
) -> tuple[np.ndarray, np.ndarray]:
    """Indices of the m most salient tokens (ascending) and their vectors.

    Ties in saliency resolve to the lower token index.
    """
    arr = check_token_matrix(z, name="z")
    sal = np.asarray(saliency, dtype=np.float64)
    if sal.ndim != 1 or sal.shape[0] != arr.shape[0]:
        raise ValueError(
            f"saliency length {sal.shape} does not match {arr.shape[0]} tokens"
        )
    if not np.all(np.isfinite(sal)) or np.any(sal < 0):
        raise ValueError("saliency scores must be finite and nonnegative")
    check_budget(m, n_tokens=arr.shape[0])
    order = np.lexsort((np.arange(sal.shape[0]), -sal))  # by -saliency, then index
    indices = np.sort(order[:m])
    return indices, arr[indices].copy()


def assign_to_centroids(z: np.ndarray, centroid_indices: np.ndarray) -> ClusterPartition:
    """Hard-assign every token to the centroid with the highest cosine.

    Cluster k is centroid k (centroid_indices is ascending). Ties, including
    duplicate centroid rows, go to the lowest k; a token that is itself a
    centroid always joins its own cluster; zero-norm tokens have cosine 0
    against everything and fall to cluster 0 unless they are centroids.
    """
    arr = check_token_matrix(z, name="z")
    idx = np.asarray(centroid_indices, dtype=np.int64)
    if idx.ndim != 1 or idx.size < 1:
        raise ValueError("centroid_indices must be a non-empty 1-D array")
    if np.any(idx < 0) or np.any(idx >= arr.shape[0]):
        raise ValueError("centroid index out of range")
    if np.any(np.diff(idx) <= 0):
        raise ValueError("centroid_indices must be strictly ascending")
    unit_tokens = normalize_rows(arr)
    unit_centroids = normalize_rows(arr[idx])
    # numpy's own kernel computes every (token, centroid) dot with the same
    # elementary reduction, so duplicate centroid rows get bitwise-equal
    # cosines and the argmax tie genuinely falls to the lowest k
    cos = np.einsum("ih,jh->ij", unit_tokens, unit_centroids)  # (n, m)
    labels = cos.argmax(axis=1)  # first occurrence, i.e. lowest k
    labels[idx] = np.arange(idx.size)  # self-assignment overrides
    return ClusterPartition(labels)


def aggregate_clusters(
    z: np.ndarray,
    partition: ClusterPartition,
    saliency: np.ndarray | None = None,
    mode: str = "weighted",
) -> np.ndarray:
    """Pool each cluster to one vector, ordered by cluster label.

    Weighted mode averages member rows with their saliency weights; a cluster
    whose weights sum to zero falls back to the plain mean. Unweighted mode
    is the plain mean regardless of saliency.
    """
    arr = check_token_matrix(z, name="z")
    if mode not in AGGREGATION_MODES:
        raise ValueError(f"mode must be one of {AGGREGATION_MODES}, got {mode!r}")
    if partition.n_tokens != arr.shape[0]:
        raise ValueError(
            f"partition covers {partition.n_tokens} tokens, document has {arr.shape[0]}"
        )
    if mode == "weighted":
        if saliency is None:
            raise ValueError("weighted aggregation requires saliency scores")
        sal = np.asarray(saliency, dtype=np.float64)
        if sal.shape != (arr.shape[0],):
            raise ValueError("saliency length does not match token count")
        if not np.all(np.isfinite(sal)) or np.any(sal < 0):
            raise ValueError("saliency scores must be finite and nonnegative")
    k = partition.n_clusters
    out = np.empty((k, arr.shape[1]), dtype=np.float64)
    for label in range(k):
        members = partition.members(label)
        if members.size == 1:
            # α_j z_j / α_j is the token itself; copy it rather than let the
            # multiply-divide round it away
            out[label] = arr[members[0]]
            continue
        if mode == "weighted":
            mass = float(np.sum(sal[members]))
            if mass > 0:
                out[label] = (sal[members] @ arr[members]) / mass
                continue
        out[label] = np.mean(arr[members], axis=0)
    return out


def agc_compress(
    z: np.ndarray,
    attention: np.ndarray,
    m: int,
    selection: str = "attention",
    aggregation: str = "weighted",
    clustering: bool = True,
    seed: int = 0,
    doc_id: str = "",
) -> np.ndarray:
    """Full per-document pipeline; returns an (m, h) float64 matrix.

    Random selection draws m token indices uniformly without replacement from
    a generator seeded by (seed, doc_id), so corpus-level parallel order
    cannot change outputs.
    """
    arr = check_token_matrix(z, name="z")
    if arr.shape[0] < 1:
        raise ValueError("cannot compress an empty document")
    att = check_attention(attention, n_tokens=arr.shape[0])
    check_budget(m, n_tokens=arr.shape[0])
    if selection not in SELECTION_MODES:
        raise ValueError(f"selection must be one of {SELECTION_MODES}, got {selection!r}")
    if aggregation not in AGGREGATION_MODES:
        raise ValueError(f"aggregation must be one of {AGGREGATION_MODES}, got {aggregation!r}")

    sal = saliency_scores(att)
    if selection == "random":
        rng = np.random.default_rng(derive_seed(seed, doc_id))
        indices = np.sort(rng.choice(arr.shape[0], size=m, replace=False))
    else:
        indices, _ = select_centroids(sal, arr, m)
    if not clustering:
        return arr[indices].copy()
    partition = assign_to_centroids(arr, indices)
    return aggregate_clusters(arr, partition, saliency=sal, mode=aggregation)


class AttentionGuidedClustering(TokenCompressor):
    """Transformer applying agc_compress per document.

    Because the method needs the attention sidecar, transform expects X to be
    a sequence of (embeddings, attention) pairs rather than bare matrices;
    corpus-level pipelines use compress_record with an AttentionSidecar.

    Parameters
    ----------
    budget : int
        Output rows m per document.
    selection : {"attention", "random"}
        Centroid choice: saliency top-m, or seeded uniform sampling.
    aggregation : {"weighted", "unweighted"}
        Saliency-weighted or plain cluster means.
    clustering : bool
        When False, skip assignment and emit the selected rows directly.
    seed : int
        Base seed for random selection, fanned out per document id.
    """

    method = "agc"

    def __init__(
        self,
        budget: int = 1,
        selection: str = "attention",
        aggregation: str = "weighted",
        clustering: bool = True,
        seed: int = 0,
    ):
        self.budget = budget
        self.selection = selection
        self.aggregation = aggregation
        self.clustering = clustering
        self.seed = seed

    def _check_params(self) -> None:
        check_budget(self.budget)
        if self.selection not in SELECTION_MODES:
            raise ValueError(f"selection must be one of {SELECTION_MODES}")
        if self.aggregation not in AGGREGATION_MODES:
            raise ValueError(f"aggregation must be one of {AGGREGATION_MODES}")
        if not isinstance(self.clustering, bool):
            raise ValueError("clustering must be a bool")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool):
            raise ValueError("seed must be an integer")

    def needs_attention(self) -> bool:
        return True

    @property
    def output_rows(self) -> int:
        return int(self.budget)

    @property
    def min_tokens(self) -> int:
        return int(self.budget)

    def transform(self, X) -> list[np.ndarray]:
        self._check_params()
        out = []
        for i, pair in enumerate(X):
            z, att = pair
            out.append(self._compress_pair(np.asarray(z), np.asarray(att), doc_label=str(i)))
        return out

    def compress_record(
        self, doc: DocumentRecord, attention: AttentionSidecar | None = None
    ) -> np.ndarray:
        self._check_params()
        if attention is None:
            raise ValueError("agc requires an attention sidecar")
        att = attention.for_doc(doc.doc_id)
        return self._compress_pair(doc.embeddings, att, doc_label=doc.doc_id)

    def variant_params(self) -> dict:
        out = {
            "selection": self.selection,
            "aggregation": self.aggregation,
            "clustering": "on" if self.clustering else "off",
        }
        if self.selection == "random":
            out["seed"] = self.seed
        return out

    def _compress_pair(self, z: np.ndarray, att: np.ndarray, doc_label: str) -> np.ndarray:
        return agc_compress(
            z,
            att,
            self.budget,
            selection=self.selection,
            aggregation=self.aggregation,
            clustering=self.clustering,
            seed=self.seed,
            doc_id=doc_label,
        )
