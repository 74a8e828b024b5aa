"""Block-parallel Monte Carlo means.

The sample range is cut into fixed-size blocks; block ``b`` always draws from
``RngStream(seed, stream_base + b)`` no matter which thread runs it, and the
block outputs are reduced in block order with exact (``math.fsum``) sums.
Results are therefore bit-identical for any worker count.

A *sampler* is a callable ``sampler(rng, count)`` returning ``count`` draws
as an array of shape ``(count,)`` or ``(count, columns)``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, NonFiniteDrawError
from .rng import RngStream

Sampler = Callable[[RngStream, int], np.ndarray]

DEFAULT_BLOCK = 4096


def default_workers() -> int:
    return max(1, len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else os.cpu_count() or 1)


@dataclass(frozen=True)
class McResult:
    estimate: float
    std_error: float
    n_samples: int
    seed: int
    workers: int

    def to_dict(self) -> dict:
        return asdict(self)

    def scaled(self, factor: float) -> "McResult":
        return McResult(self.estimate * factor, self.std_error * abs(factor), self.n_samples, self.seed, self.workers)


def _blocks(n_samples: int, block_size: int) -> list[tuple[int, int]]:
    return [(start, min(block_size, n_samples - start)) for start in range(0, n_samples, block_size)]


def mc_collect(
    sampler: Sampler,
    n_samples: int,
    seed: int,
    workers: int = 1,
    block_size: int = DEFAULT_BLOCK,
    stream_base: int = 0,
) -> np.ndarray:
    """All draws in sample order, shape ``(n_samples,)`` or ``(n_samples, c)``."""
    if n_samples < 1:
        raise DomainError(f"n_samples must be positive, got {n_samples}")
    if workers < 1:
        raise DomainError(f"workers must be positive, got {workers}")
    blocks = _blocks(int(n_samples), int(block_size))

    def run(b: int) -> np.ndarray:
        start, count = blocks[b]
        stream = stream_base + b
        draws = np.asarray(sampler(RngStream(seed, stream), count), dtype=np.float64)
        if draws.shape[0] != count:
            raise DomainError(f"sampler returned {draws.shape[0]} draws, expected {count}")
        bad = ~np.isfinite(draws)
        if bad.any():
            row = int(np.argwhere(bad)[0][0])
            raise NonFiniteDrawError(
                f"non-finite draw {draws[row]!r} at sample {start + row} "
                f"(block {b}, stream_id {stream}, position {row} in block, seed {seed})"
            )
        return draws

    if workers == 1 or len(blocks) == 1:
        parts = [run(b) for b in range(len(blocks))]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, range(len(blocks))))
    return np.concatenate(parts, axis=0)


def summarize(draws: np.ndarray, seed: int, workers: int) -> list[McResult]:
    """Mean and standard error of each column, reduced with exact sums."""
    draws = np.asarray(draws, dtype=np.float64)
    cols = draws.reshape(draws.shape[0], -1)
    n = cols.shape[0]
    out = []
    for j in range(cols.shape[1]):
        x = cols[:, j]
        mean = math.fsum(x) / n
        if n > 1:
            var = math.fsum((x - mean) ** 2) / (n - 1)
            se = math.sqrt(var / n)
        else:
            se = math.inf
        out.append(McResult(mean, se, n, seed, workers))
    return out


def mc_means(
    sampler: Sampler,
    n_samples: int,
    seed: int,
    workers: int = 1,
    block_size: int = DEFAULT_BLOCK,
    stream_base: int = 0,
) -> list[McResult]:
    """One McResult per output column of a multi-column sampler."""
    draws = mc_collect(sampler, n_samples, seed, workers, block_size, stream_base)
    return summarize(draws, seed, workers)


def mc_mean(
    sampler: Sampler,
    n_samples: int,
    seed: int,
    workers: int = 1,
    block_size: int = DEFAULT_BLOCK,
    stream_base: int = 0,
) -> McResult:
    """Sample mean and standard error (sample std / sqrt(n)) of a scalar sampler."""
    if n_samples < 2:
        raise DomainError(f"n_samples must be at least 2, got {n_samples}")
    draws = mc_collect(sampler, n_samples, seed, workers, block_size, stream_base)
    if draws.ndim != 1:
        raise DomainError("mc_mean needs a scalar sampler; use mc_means for several columns")
    return summarize(draws, seed, workers)[0]
