"""Deterministic seed fan-out.

All randomness in the package flows from one user seed. Derived seeds come
from hashing the seed together with stable string labels (sha256, not
Python's salted hash), so results reproduce across processes and platforms.
"""

from __future__ import annotations

import hashlib


def derive_seed(seed: int, *labels: str) -> int:
    """Child seed for (seed, labels), stable across runs. Returns a u64."""
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ValueError(f"seed must be an integer, got {seed!r}")
    material = str(seed) + "".join("\x00" + label for label in labels)
    digest = hashlib.sha256(material.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")
