"""Deterministic task fan-out.

Every task gets its own generator seeded from ``(seed, task_index)``, so
results do not depend on how many workers run them.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence, TypeVar

import numpy as np

T = TypeVar("T")

BATCH_SIZE = 4096


def task_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(index)])


def worker_count() -> int:
    raw = os.environ.get("KWITNESS_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_tasks(fn: Callable[[int], T], n_tasks: int) -> list[T]:
    """Evaluate ``fn(0..n_tasks-1)``; output order is the task order."""
    workers = min(worker_count(), n_tasks)
    if workers <= 1:
        return [fn(i) for i in range(n_tasks)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(n_tasks)))


def batch_sizes(total: int, size: int = BATCH_SIZE) -> Sequence[int]:
    full, rest = divmod(int(total), size)
    return [size] * full + ([rest] if rest else [])


def random_unit_vectors(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    z = rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def random_isometries(rng: np.random.Generator, count: int, dim: int, rank: int) -> np.ndarray:
    """Haar-distributed ``dim x rank`` isometries, shape ``(count, dim, rank)``."""
    z = rng.standard_normal((count, dim, rank)) + 1j * rng.standard_normal((count, dim, rank))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=1, axis2=2)
    return q * (d / np.abs(d))[:, None, :]
