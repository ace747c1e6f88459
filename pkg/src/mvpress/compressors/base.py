"""Shared compressor machinery: the cluster partition type and the
transformer-style base class."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from ..model import AttentionSidecar, DocumentRecord


@dataclass(frozen=True)
class ClusterPartition:
    """A hard partition of n tokens into k nonempty clusters.

    Labels are contiguous integers 0..k-1 and every label occurs at least
    once. Label order conventions differ by producer: hierarchical pooling
    orders clusters by minimum member index, centroid assignment orders them
    by centroid position.
    """

    labels: np.ndarray

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        if labels.ndim != 1 or labels.size < 1:
            raise ValueError(f"labels must be a non-empty 1-D array, got shape {labels.shape}")
        k = int(labels.max()) + 1
        if labels.min() < 0 or len(np.unique(labels)) != k:
            raise ValueError("labels must be contiguous 0..k-1 with no empty cluster")
        labels.flags.writeable = False
        object.__setattr__(self, "labels", labels)

    @property
    def n_tokens(self) -> int:
        return self.labels.shape[0]

    @property
    def n_clusters(self) -> int:
        return int(self.labels.max()) + 1

    @property
    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.n_clusters)

    def members(self, cluster: int) -> np.ndarray:
        """Member token indices of one cluster, ascending."""
        return np.flatnonzero(self.labels == cluster)

    def relabeled_by_min_member(self) -> "ClusterPartition":
        """Canonical form: clusters renumbered by ascending minimum member."""
        order = []
        seen = set()
        for label in self.labels:
            if int(label) not in seen:
                seen.add(int(label))
                order.append(int(label))
        remap = {old: new for new, old in enumerate(order)}
        return ClusterPartition(np.array([remap[int(l)] for l in self.labels]))


class TokenCompressor(BaseEstimator, TransformerMixin):
    """Base class for fixed-budget document compressors.

    Stateless transformers: fit only validates parameters and returns self.
    transform maps a sequence of (n_i, h) float matrices to a list of (m, h)
    float64 matrices. Subclasses implement _compress_doc and declare their
    method name and minimum acceptable document length.
    """

    method: str = ""

    def fit(self, X=None, y=None):
        self._check_params()
        return self

    def transform(self, X) -> list[np.ndarray]:
        self._check_params()
        return [self._compress_doc(np.asarray(x)) for x in X]

    def compress_record(
        self, doc: DocumentRecord, attention: AttentionSidecar | None = None
    ) -> np.ndarray:
        """Compress one corpus document. Attention is ignored by methods that
        do not need it; the AGC subclass overrides this."""
        self._check_params()
        return self._compress_doc(doc.embeddings)

    def needs_attention(self) -> bool:
        return False

    @property
    def output_rows(self) -> int:
        """The budget m: rows every transformed document has."""
        raise NotImplementedError

    @property
    def min_tokens(self) -> int:
        """Smallest document length this compressor accepts."""
        return 1

    @property
    def protected_count(self) -> int:
        return 0

    def variant_params(self) -> dict | None:
        """Method-specific flags recorded in CompressionMeta, if any."""
        return None

    def _check_params(self) -> None:
        raise NotImplementedError

    def _compress_doc(self, z: np.ndarray) -> np.ndarray:
        raise NotImplementedError
