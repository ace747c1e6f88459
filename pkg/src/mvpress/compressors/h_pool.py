"""Hierarchical pooling: agglomerate tokens to the budget with Ward's merge
criterion, pool each cluster to its mean, and pass protected tokens through.

The merge cost between clusters A and B is
    |A||B| / (|A|+|B|) * squared distance between their centroids,
computed on raw vectors in float64. The cosine distance matrix is exposed for
analytics but is not the merge criterion. When several pairs share the exact
minimum cost, the pair whose sorted (min member, min member) key is
lexicographically smallest merges first; reference.py implements the same
rule from scratch and the two must produce identical partitions.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from ..model import Budget
from ..scoring import normalize_rows
from ..validation import check_protected_indices, check_token_matrix
from .base import ClusterPartition, TokenCompressor


def cosine_distance_matrix(x: np.ndarray) -> np.ndarray:
    """(n, n) matrix of 1 - cosine similarity.

    Zero-norm rows use the convention cos = 0, so their distances are 1
    everywhere, including the diagonal. Diagonal entries of nonzero rows are
    exactly 0; all entries lie in [0, 2].
    """
    arr = check_token_matrix(x, name="x")
    if arr.shape[0] < 1:
        raise ValueError("cosine distance needs at least one row")
    unit = normalize_rows(arr)
    cos = np.clip(unit @ unit.T, -1.0, 1.0)
    dist = 1.0 - cos
    nonzero = np.linalg.norm(arr, axis=1) > 0
    np.fill_diagonal(dist, np.where(nonzero, 0.0, 1.0))
    return dist


def ward_merge_cost(
    size_a: int, centroid_a: np.ndarray, size_b: int, centroid_b: np.ndarray
) -> float:
    """Increase in within-cluster squared error from merging two clusters."""
    if size_a < 1 or size_b < 1:
        raise ValueError("cluster sizes must be >= 1")
    diff = np.asarray(centroid_a, dtype=np.float64) - np.asarray(centroid_b, dtype=np.float64)
    return size_a * size_b / (size_a + size_b) * float(np.einsum("h,h->", diff, diff))


def _costs_against(
    sizes: np.ndarray, centroids: np.ndarray, size_b: float, centroid_b: np.ndarray
) -> np.ndarray:
    # every pair cost in ward_partition flows through here; the squared norms
    # use numpy's einsum kernel, whose batched row reduction is bitwise equal
    # to the scalar "h,h->" contraction on each row (unlike a BLAS dot), and
    # the size factor is a plain elementwise ufunc chain — so equal-cost pairs
    # tie exactly, here and against any from-scratch recomputation of the
    # same formula one pair at a time
    diffs = centroids - centroid_b
    dots = np.einsum("ij,ij->i", diffs, diffs)
    return sizes * size_b / (sizes + size_b) * dots


def ward_partition(x: np.ndarray, n_clusters: int) -> ClusterPartition:
    """Agglomerate the rows of x into exactly n_clusters clusters.

    Maintains a pairwise cost matrix and refreshes only the merged cluster's
    row after each step; centroids are always recomputed as the mean of the
    member rows in ascending index order, which keeps this path's merge
    decisions identical to the brute-force reference implementation.
    """
    arr = check_token_matrix(x, name="x")
    n = arr.shape[0]
    if n < 1:
        raise ValueError("cannot cluster an empty matrix")
    if not 1 <= n_clusters <= n:
        raise ValueError(f"cluster count must be in [1, {n}], got {n_clusters}")

    members: list[list[int] | None] = [[i] for i in range(n)]
    sizes = np.ones(n, dtype=np.float64)
    centroids = arr.copy()
    min_member = np.arange(n)
    alive = np.ones(n, dtype=bool)

    costs = np.full((n, n), np.inf, dtype=np.float64)
    for i in range(n - 1):
        row = _costs_against(sizes[i + 1 :], centroids[i + 1 :], sizes[i], centroids[i])
        costs[i, i + 1 :] = row
        costs[i + 1 :, i] = row

    remaining = n
    while remaining > n_clusters:
        flat_costs = costs.ravel()
        cmin = flat_costs[int(np.argmin(flat_costs))]
        best = None
        for f in np.flatnonzero(flat_costs == cmin):
            a, b = divmod(int(f), n)
            if a >= b:
                continue
            lo, hi = sorted((int(min_member[a]), int(min_member[b])))
            key = (lo, hi)
            if best is None or key < best[0]:
                best = (key, a, b)
        _, a, b = best

        merged = sorted(members[a] + members[b])
        members[a] = merged
        members[b] = None
        sizes[a] = len(merged)
        centroids[a] = np.mean(arr[merged], axis=0)
        min_member[a] = merged[0]
        alive[b] = False
        costs[b, :] = np.inf
        costs[:, b] = np.inf

        others = np.flatnonzero(alive)
        others = others[others != a]
        if others.size:
            row = _costs_against(sizes[others], centroids[others], sizes[a], centroids[a])
            costs[a, others] = row
            costs[others, a] = row
        remaining -= 1

    final = sorted((m for m in members if m is not None), key=lambda m: m[0])
    labels = np.empty(n, dtype=np.int64)
    for label, cluster in enumerate(final):
        labels[cluster] = label
    return ClusterPartition(labels)


def hierarchical_pool(
    x: np.ndarray, budget: Budget, protected: Sequence[int] = ()
) -> tuple[np.ndarray, ClusterPartition]:
    """Compress a (n, h) matrix to exactly budget.m rows.

    Protected tokens leave the pool untouched; the rest agglomerate to
    m - protected clusters whose means come first in the output, ordered by
    cluster label, followed by the protected rows in their given order.
    Returns the (m, h) float64 output and the partition of the pooled tokens
    (labels index the non-protected subsequence in ascending token order).
    """
    arr = check_token_matrix(x, name="x")
    n = arr.shape[0]
    if n < 1:
        raise ValueError("cannot compress an empty document")
    protected = check_protected_indices(protected, n)
    if len(protected) != budget.protected:
        raise ValueError(
            f"budget declares {budget.protected} protected tokens, got {len(protected)}"
        )
    if n < budget.m:
        raise ValueError(f"document has {n} tokens, fewer than budget {budget.m}; no upsampling")

    protected_set = set(protected)
    pool_idx = [i for i in range(n) if i not in protected_set]
    pool = arr[pool_idx]
    k = budget.m - budget.protected
    partition = ward_partition(pool, k)
    pooled = np.empty((k, arr.shape[1]), dtype=np.float64)
    for label in range(k):
        pooled[label] = np.mean(pool[partition.members(label)], axis=0)
    if protected:
        out = np.vstack([pooled, arr[protected]])
    else:
        out = pooled
    return out, partition


class HierarchicalPool(TokenCompressor):
    """Transformer applying hierarchical pooling per document.

    Parameters
    ----------
    budget : int
        Output rows m per document.
    protected : int, default 0
        How many leading token positions pass through unpooled.
    """

    method = "h-pool"

    def __init__(self, budget: int = 1, protected: int = 0):
        self.budget = budget
        self.protected = protected

    def _check_params(self) -> None:
        Budget(m=self.budget, protected=self.protected)

    @property
    def output_rows(self) -> int:
        return int(self.budget)

    @property
    def min_tokens(self) -> int:
        return int(self.budget)

    @property
    def protected_count(self) -> int:
        return int(self.protected)

    def _compress_doc(self, z: np.ndarray) -> np.ndarray:
        budget = Budget(m=self.budget, protected=self.protected)
        out, _ = hierarchical_pool(z, budget, protected=range(self.protected))
        return out
