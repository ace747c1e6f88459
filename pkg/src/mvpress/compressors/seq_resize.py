"""Sequence resizing: pad-or-truncate to a fixed length, then map each hidden
channel through a two-layer MLP (no biases) down to the budget.

Weights are supplied as a file; this module runs inference only.

MRSZ file layout (little-endian):
    magic "MRSZ" | u32 version=1 | u32 n0 | u32 d | u32 m
    | d*n0 f32 row-major (first layer) | m*d f32 row-major (second layer)
"""

from __future__ import annotations

import io
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import CorruptionError, ValidationError
from ..formats import FORMAT_VERSION, _check_eof, _check_magic, _read_f32_block, _read_u32
from ..validation import check_token_matrix
from .base import TokenCompressor

MRSZ_MAGIC = b"MRSZ"


@dataclass(frozen=True, eq=False)
class ResizeWeights:
    """MLP weights mapping a length-n0 channel to m outputs through width d."""

    w1: np.ndarray  # (d, n0)
    w2: np.ndarray  # (m, d)

    def __eq__(self, other):
        if not isinstance(other, ResizeWeights):
            return NotImplemented
        return (
            self.w1.shape == other.w1.shape
            and self.w2.shape == other.w2.shape
            and bool(np.array_equal(self.w1, other.w1))
            and bool(np.array_equal(self.w2, other.w2))
        )

    def __post_init__(self):
        w1 = np.asarray(self.w1, dtype=np.float32)
        w2 = np.asarray(self.w2, dtype=np.float32)
        if w1.ndim != 2 or w2.ndim != 2:
            raise ValueError("weight matrices must be 2-D")
        if min(w1.shape) < 1 or min(w2.shape) < 1:
            raise ValueError(f"degenerate weight shapes {w1.shape}, {w2.shape}")
        if w2.shape[1] != w1.shape[0]:
            raise ValueError(
                f"second layer expects width {w2.shape[1]}, first layer produces {w1.shape[0]}"
            )
        if not (np.all(np.isfinite(w1)) and np.all(np.isfinite(w2))):
            raise ValidationError("resize weights contain non-finite values")
        for w in (w1, w2):
            w.flags.writeable = False
        object.__setattr__(self, "w1", w1)
        object.__setattr__(self, "w2", w2)

    @property
    def n0(self) -> int:
        return self.w1.shape[1]

    @property
    def hidden(self) -> int:
        return self.w1.shape[0]

    @property
    def m(self) -> int:
        return self.w2.shape[0]


def pad_trunc(z: np.ndarray, n0: int) -> np.ndarray:
    """Fix a token matrix to exactly n0 rows: keep the first n0, or append
    zero rows. Returns float64."""
    if n0 < 1:
        raise ValueError(f"n0 must be >= 1, got {n0}")
    arr = check_token_matrix(z, name="z")
    if arr.shape[0] < 1:
        raise ValueError("cannot pad an empty document")
    n, h = arr.shape
    if n >= n0:
        return arr[:n0].copy()
    out = np.zeros((n0, h), dtype=np.float64)
    out[:n] = arr
    return out


def resize_sequence(z: np.ndarray, weights: ResizeWeights) -> np.ndarray:
    """Compress a (n, h) matrix to (m, h) through the sequence-dimension MLP.

    Each hidden channel is a length-n0 column after pad_trunc; the channel
    passes through ReLU(W1 @ col) then W2. All arithmetic in float64.
    """
    fixed = pad_trunc(z, weights.n0)  # (n0, h)
    w1 = weights.w1.astype(np.float64)
    w2 = weights.w2.astype(np.float64)
    hidden = np.maximum(w1 @ fixed, 0.0)  # (d, h)
    return w2 @ hidden  # (m, h)


def write_resize_weights(weights: ResizeWeights, path: str | Path) -> None:
    out = io.BytesIO()
    out.write(MRSZ_MAGIC)
    out.write(struct.pack("<IIII", FORMAT_VERSION, weights.n0, weights.hidden, weights.m))
    out.write(np.ascontiguousarray(weights.w1, dtype="<f4").tobytes())
    out.write(np.ascontiguousarray(weights.w2, dtype="<f4").tobytes())
    Path(path).write_bytes(out.getvalue())


def read_resize_weights(path: str | Path) -> ResizeWeights:
    with open(path, "rb") as f:
        _check_magic(f, MRSZ_MAGIC, "MRSZ")
        n0 = _read_u32(f, "n0")
        d = _read_u32(f, "hidden width")
        m = _read_u32(f, "budget")
        if min(n0, d, m) == 0:
            raise CorruptionError(f"degenerate weight shape n0={n0} d={d} m={m}")
        w1 = _read_f32_block(f, d * n0, (d, n0), "first layer")
        w2 = _read_f32_block(f, m * d, (m, d), "second layer")
        _check_eof(f, "MRSZ")
    if not (np.all(np.isfinite(w1)) and np.all(np.isfinite(w2))):
        raise ValidationError("resize weights contain non-finite values")
    return ResizeWeights(w1=w1, w2=w2)


class SequenceResize(TokenCompressor):
    """Transformer applying resize_sequence with fixed weights.

    Parameters
    ----------
    weights : ResizeWeights
        Learned MLP weights; the output budget is weights.m.
    """

    method = "seq-resize"

    def __init__(self, weights: ResizeWeights | None = None):
        self.weights = weights

    def _check_params(self) -> None:
        if not isinstance(self.weights, ResizeWeights):
            raise ValueError("SequenceResize requires a ResizeWeights instance")

    @property
    def output_rows(self) -> int:
        self._check_params()
        return self.weights.m

    def _compress_doc(self, z: np.ndarray) -> np.ndarray:
        return resize_sequence(z, self.weights)
