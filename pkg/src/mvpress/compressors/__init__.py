"""Fixed-budget compressors for multi-vector documents.

Four methods, one contract: a document's (n, h) token matrix goes in, exactly
(m, h) comes out. Functional per-document ops live next to transformer-style
estimator classes that apply them over sequences of documents.
"""

from .base import ClusterPartition, TokenCompressor
from .seq_resize import (
    ResizeWeights,
    SequenceResize,
    pad_trunc,
    read_resize_weights,
    resize_sequence,
    write_resize_weights,
)
from .mem_tok import MemoryTokens, extract_memory_tokens
from .h_pool import (
    HierarchicalPool,
    cosine_distance_matrix,
    hierarchical_pool,
    ward_merge_cost,
    ward_partition,
)
from .reference import reference_ward_partition
from .agc import (
    AttentionGuidedClustering,
    agc_compress,
    aggregate_clusters,
    assign_to_centroids,
    saliency_scores,
    select_centroids,
)

__all__ = [
    "AttentionGuidedClustering",
    "ClusterPartition",
    "HierarchicalPool",
    "MemoryTokens",
    "ResizeWeights",
    "SequenceResize",
    "TokenCompressor",
    "agc_compress",
    "aggregate_clusters",
    "assign_to_centroids",
    "cosine_distance_matrix",
    "extract_memory_tokens",
    "hierarchical_pool",
    "pad_trunc",
    "read_resize_weights",
    "reference_ward_partition",
    "resize_sequence",
    "saliency_scores",
    "select_centroids",
    "ward_merge_cost",
    "ward_partition",
    "write_resize_weights",
]
