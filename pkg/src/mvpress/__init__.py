"""Multi-vector index compression and late-interaction retrieval.

Variable-length token-embedding documents are compressed to a fixed vector
budget by one of four methods (parametric sequence resizing, memory-token
extraction, hierarchical pooling, attention-guided clustering), stored in a
flat index, and searched exhaustively with the MaxSim operator. Evaluation
covers standard retrieval metrics plus index-utilization analytics.
"""

from .analytics import (
    EvennessReport,
    correlation_table,
    cv,
    evenness_report,
    gini,
    matching_strength,
    mean_pairwise_cosine,
    pearson,
    pearson_test,
    strength_by_position_pair,
    utilization_fraction,
)
from .compressors import (
    AttentionGuidedClustering,
    ClusterPartition,
    HierarchicalPool,
    MemoryTokens,
    ResizeWeights,
    SequenceResize,
    TokenCompressor,
    agc_compress,
    aggregate_clusters,
    assign_to_centroids,
    cosine_distance_matrix,
    extract_memory_tokens,
    hierarchical_pool,
    pad_trunc,
    read_resize_weights,
    reference_ward_partition,
    resize_sequence,
    saliency_scores,
    select_centroids,
    ward_merge_cost,
    ward_partition,
    write_resize_weights,
)
from .errors import (
    CorruptionError,
    EvaluationError,
    FormatError,
    MvpressError,
    ParseError,
    ValidationError,
)
from .formats import read_matt, read_meta, read_mvec, write_matt, write_meta, write_mvec
from .index import FlatIndex, build_index, load_index, save_index, search_corpus, search_one
from .matchlog import read_match_log, write_match_log
from .metrics import compression_ratio, mrr, ndcg_at_k, percent_of_baseline, recall_at_k
from .model import (
    COMPRESSION_METHODS,
    AttentionSidecar,
    Budget,
    CompressionMeta,
    Corpus,
    DocumentRecord,
)
from .pipeline import compress_corpus
from .scoring import MatchRecord, ScoredDoc, maxsim_score, maxsim_with_matches, normalize_corpus, normalize_rows, score_block
from .synth import SynthSpec, generate_synth
from .trec import Qrels, RunEntry, RunList, read_qrels, read_run, write_qrels, write_run

__version__ = "0.1.0"

__all__ = [
    "AttentionGuidedClustering",
    "AttentionSidecar",
    "Budget",
    "COMPRESSION_METHODS",
    "ClusterPartition",
    "CompressionMeta",
    "Corpus",
    "CorruptionError",
    "DocumentRecord",
    "EvaluationError",
    "EvennessReport",
    "FlatIndex",
    "FormatError",
    "HierarchicalPool",
    "MatchRecord",
    "MemoryTokens",
    "MvpressError",
    "ParseError",
    "Qrels",
    "ResizeWeights",
    "RunEntry",
    "RunList",
    "ScoredDoc",
    "SequenceResize",
    "SynthSpec",
    "TokenCompressor",
    "ValidationError",
    "agc_compress",
    "aggregate_clusters",
    "assign_to_centroids",
    "build_index",
    "compress_corpus",
    "compression_ratio",
    "correlation_table",
    "cosine_distance_matrix",
    "cv",
    "evenness_report",
    "extract_memory_tokens",
    "generate_synth",
    "gini",
    "hierarchical_pool",
    "load_index",
    "matching_strength",
    "maxsim_score",
    "maxsim_with_matches",
    "mean_pairwise_cosine",
    "mrr",
    "ndcg_at_k",
    "normalize_corpus",
    "normalize_rows",
    "pad_trunc",
    "pearson",
    "pearson_test",
    "percent_of_baseline",
    "read_match_log",
    "read_matt",
    "read_meta",
    "read_mvec",
    "read_qrels",
    "read_resize_weights",
    "read_run",
    "recall_at_k",
    "reference_ward_partition",
    "resize_sequence",
    "saliency_scores",
    "save_index",
    "score_block",
    "search_corpus",
    "search_one",
    "select_centroids",
    "strength_by_position_pair",
    "utilization_fraction",
    "ward_merge_cost",
    "ward_partition",
    "write_match_log",
    "write_matt",
    "write_meta",
    "write_mvec",
    "write_qrels",
    "write_resize_weights",
    "write_run",
]
