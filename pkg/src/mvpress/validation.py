"""Input validation helpers shared across the package.

The checks here guard API boundaries: token matrices must be finite 2-D float
arrays, attention tensors nonnegative, budgets positive and within range.
File-integrity checks live next to the readers in formats.py.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from .errors import ValidationError

MAX_ID_BYTES = 4096


def check_token_matrix(x, *, dim: int | None = None, name: str = "x") -> np.ndarray:
    """Validate a (n, h) token-embedding matrix and return it as float64.

    Accepts any float array-like. Empty matrices (n == 0) pass here; ops that
    cannot handle them reject explicitly.
    """
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D (tokens, dim), got shape {arr.shape}")
    if arr.shape[1] < 1:
        raise ValueError(f"{name} must have at least one column, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite values")
    if dim is not None and arr.shape[1] != dim:
        raise ValueError(f"{name} has dim {arr.shape[1]}, expected {dim}")
    return arr


def check_attention(att, *, n_tokens: int | None = None, name: str = "attention") -> np.ndarray:
    """Validate a (rows, heads, n) attention tensor: finite and nonnegative."""
    arr = np.asarray(att, dtype=np.float64)
    if arr.ndim != 3:
        raise ValueError(f"{name} must be 3-D (rows, heads, tokens), got shape {arr.shape}")
    if min(arr.shape) < 1:
        raise ValueError(f"{name} must be non-degenerate, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite values")
    if np.any(arr < 0):
        raise ValidationError(f"{name} contains negative weights")
    if n_tokens is not None and arr.shape[2] != n_tokens:
        raise ValueError(
            f"{name} covers {arr.shape[2]} token positions, document has {n_tokens}"
        )
    return arr


def check_budget(m: int, *, n_tokens: int | None = None) -> int:
    """Validate a vector budget, optionally against a document length."""
    if not isinstance(m, (int, np.integer)) or isinstance(m, bool):
        raise ValueError(f"budget must be an integer, got {m!r}")
    if m < 1:
        raise ValueError(f"budget must be >= 1, got {m}")
    if n_tokens is not None and n_tokens < m:
        raise ValueError(f"document has {n_tokens} tokens, fewer than budget {m}")
    return int(m)


def check_doc_id(doc_id: str) -> str:
    """Validate a document/query identifier: non-empty, within the byte cap."""
    if not isinstance(doc_id, str) or not doc_id:
        raise ValidationError(f"id must be a non-empty string, got {doc_id!r}")
    if len(doc_id.encode("utf-8")) > MAX_ID_BYTES:
        raise ValidationError(f"id exceeds {MAX_ID_BYTES} utf-8 bytes")
    return doc_id


def check_protected_indices(protected: Sequence[int], n_tokens: int) -> list[int]:
    """Validate protected token indices: distinct and within [0, n_tokens)."""
    out = []
    for i in protected:
        if not isinstance(i, (int, np.integer)) or isinstance(i, bool):
            raise ValueError(f"protected index must be an integer, got {i!r}")
        if not 0 <= i < n_tokens:
            raise ValueError(f"protected index {i} out of range for {n_tokens} tokens")
        out.append(int(i))
    if len(set(out)) != len(out):
        raise ValueError("protected indices must be distinct")
    return out
