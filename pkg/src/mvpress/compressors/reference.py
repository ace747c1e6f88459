"""Brute-force reference implementation of the Ward agglomeration.

Deliberately literal and O(n^3): every step recomputes every cluster pair's
centroids and merge cost from scratch and merges the global minimizer, with
ties broken by the lexicographically smallest pair of cluster minimum member
indices. Shares no code with the production path in h_pool.py; the two must
agree exactly, which is an acceptance gate for the production path.
"""

from __future__ import annotations

import numpy as np

from ..validation import check_token_matrix
from .base import ClusterPartition


def reference_ward_partition(x: np.ndarray, n_clusters: int) -> ClusterPartition:
    """Partition the rows of x into n_clusters clusters, the slow exact way."""
    arr = check_token_matrix(x, name="x")
    n = arr.shape[0]
    if n < 1:
        raise ValueError("cannot cluster an empty matrix")
    if not 1 <= n_clusters <= n:
        raise ValueError(f"cluster count must be in [1, {n}], got {n_clusters}")

    clusters: list[list[int]] = [[i] for i in range(n)]
    while len(clusters) > n_clusters:
        best_key = None
        best_pair = None
        for a in range(len(clusters)):
            for b in range(a + 1, len(clusters)):
                ca, cb = clusters[a], clusters[b]
                mu_a = np.mean(arr[ca], axis=0)
                mu_b = np.mean(arr[cb], axis=0)
                diff = mu_a - mu_b
                cost = len(ca) * len(cb) / (len(ca) + len(cb)) * float(
                    np.einsum("h,h->", diff, diff)
                )
                lo, hi = sorted((ca[0], cb[0]))  # members kept sorted, [0] is the min
                key = (cost, lo, hi)
                if best_key is None or key < best_key:
                    best_key = key
                    best_pair = (a, b)
        a, b = best_pair
        merged = sorted(clusters[a] + clusters[b])
        clusters = [c for i, c in enumerate(clusters) if i not in (a, b)]
        clusters.append(merged)

    clusters.sort(key=lambda c: c[0])
    labels = np.empty(n, dtype=np.int64)
    for label, cluster in enumerate(clusters):
        labels[cluster] = label
    return ClusterPartition(labels)
