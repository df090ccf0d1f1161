"""Deterministic substream derivation.

Every Monte Carlo routine draws from a counter-based Philox generator
keyed by a hash of (master seed, label parts).  Adding experiments or
reordering reps never perturbs existing streams, and reductions over
reps are schedule-independent.
"""

from __future__ import annotations

import hashlib

import numpy as np


def substream_key(master: int, *parts) -> int:
    text = "/".join([str(int(master)), *map(str, parts)])
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


def substream(master: int, *parts) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=substream_key(master, *parts)))
