"""Chunked thread-pool evaluation with order-preserving merge.

Every chunk is evaluated independently and results are concatenated in
index order, so output does not depend on the worker count.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .errors import DomainError

CHUNK = 4096


def thread_count() -> int:
    raw = os.environ.get("ZLAB_THREADS")
    if raw is None or raw == "":
        return min(8, os.cpu_count() or 1)
    try:
        n = int(raw)
    except ValueError:
        raise DomainError(f"ZLAB_THREADS must be a positive integer, got {raw!r}")
    if n < 1:
        raise DomainError(f"ZLAB_THREADS must be a positive integer, got {raw!r}")
    return n


def chunked_map(fn, xs: np.ndarray, chunk: int = CHUNK) -> np.ndarray:
    """Apply a vectorized ``fn`` to ``xs`` chunk by chunk, possibly in threads."""
    xs = np.asarray(xs, dtype=float)
    if xs.size <= chunk:
        return np.asarray(fn(xs), dtype=float)
    pieces = [xs[i:i + chunk] for i in range(0, xs.size, chunk)]
    workers = thread_count()
    if workers == 1:
        out = [fn(piece) for piece in pieces]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            out = list(pool.map(fn, pieces))
    return np.concatenate(out)
