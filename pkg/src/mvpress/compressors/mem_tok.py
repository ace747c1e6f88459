"""Memory-token extraction: the compressed representation is the final state
of the m memory rows appended to the document, i.e. the last m rows of the
encoder output."""

from __future__ import annotations

import numpy as np

from ..validation import check_budget, check_token_matrix
from .base import TokenCompressor


def extract_memory_tokens(z: np.ndarray, m: int) -> np.ndarray:
    """Return the last m rows of z as float64. z must have at least m rows."""
    arr = check_token_matrix(z, name="z")
    check_budget(m, n_tokens=arr.shape[0])
    return arr[arr.shape[0] - m :].copy()


class MemoryTokens(TokenCompressor):
    """Transformer extracting the trailing memory-token rows.

    Parameters
    ----------
    budget : int
        Number of memory rows m at the end of every encoder output.
    """

    method = "mem-tok"

    def __init__(self, budget: int = 1):
        self.budget = budget

    def _check_params(self) -> None:
        check_budget(self.budget)

    @property
    def output_rows(self) -> int:
        return int(self.budget)

    @property
    def min_tokens(self) -> int:
        return int(self.budget)

    def _compress_doc(self, z: np.ndarray) -> np.ndarray:
        return extract_memory_tokens(z, self.budget)
