"""Seeded, chunked parallel execution for Monte Carlo loops"""

import math
import os
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, TypeVar

import numpy as np

from config.config import get_config

logger = logging.getLogger(__name__)

T = TypeVar("T")


def worker_count(max_workers: Optional[int] = None) -> int:
    """
    Resolve the number of worker threads

    Args:
        max_workers: Explicit cap (takes precedence)

    Returns:
        AMOEBA_THREADS / config value, else machine parallelism
    """
    if max_workers is None:
        max_workers = get_config('amoeba.threads')
    if max_workers is None:
        max_workers = os.cpu_count() or 1
    return max(1, int(max_workers))


def chunk_sizes(n_samples: int, chunk_size: int) -> List[int]:
    """Split n_samples into consecutive chunks of at most chunk_size"""
    if n_samples <= 0:
        return []
    n_chunks = math.ceil(n_samples / chunk_size)
    sizes = [chunk_size] * (n_chunks - 1)
    sizes.append(n_samples - chunk_size * (n_chunks - 1))
    return sizes


def run_chunked(
    task: Callable[[np.random.Generator, int], T],
    n_samples: int,
    seed: int,
    chunk_size: Optional[int] = None,
    max_workers: Optional[int] = None
) -> List[T]:
    """
    Run task(rng, size) over seeded chunks of a sample budget

    Each chunk gets its own generator spawned from SeedSequence(seed), so the
    concatenated result depends only on (seed, chunk_size), never on the
    number of threads or completion order.

    Args:
        task: Callable receiving a numpy Generator and the chunk size
        n_samples: Total number of samples
        seed: Root seed (any 64-bit integer)
        chunk_size: Samples per chunk (defaults to amoeba.chunk_size)
        max_workers: Thread cap (defaults to AMOEBA_THREADS / cpu count)

    Returns:
        Chunk results in chunk order
    """
    if chunk_size is None:
        chunk_size = int(get_config('amoeba.chunk_size', 65536))
    sizes = chunk_sizes(n_samples, chunk_size)
    if not sizes:
        return []

    root = np.random.SeedSequence(int(seed) & 0xFFFFFFFFFFFFFFFF)
    generators = [np.random.default_rng(child) for child in root.spawn(len(sizes))]

    workers = min(worker_count(max_workers), len(sizes))
    logger.debug(f"Running {len(sizes)} chunks of <= {chunk_size} samples on {workers} threads")

    if workers == 1:
        return [task(rng, size) for rng, size in zip(generators, sizes)]

    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = [executor.submit(task, rng, size) for rng, size in zip(generators, sizes)]
        return [future.result() for future in futures]


def map_chunks(
    task: Callable[[int, int], T],
    n_items: int,
    chunk_size: Optional[int] = None,
    max_workers: Optional[int] = None
) -> List[T]:
    """
    Run task(start, stop) over consecutive index ranges covering [0, n_items)

    Used for deterministic grid sweeps where no randomness is involved.

    Returns:
        Chunk results in index order
    """
    if chunk_size is None:
        chunk_size = int(get_config('amoeba.chunk_size', 65536))
    sizes = chunk_sizes(n_items, chunk_size)
    bounds = []
    start = 0
    for size in sizes:
        bounds.append((start, start + size))
        start += size
    if not bounds:
        return []

    workers = min(worker_count(max_workers), len(bounds))
    if workers == 1:
        return [task(lo, hi) for lo, hi in bounds]

    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = [executor.submit(task, lo, hi) for lo, hi in bounds]
        return [future.result() for future in futures]
