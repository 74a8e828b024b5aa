"""Counter-based random streams.

A stream is a 64-bit key plus a word position.  Word ``i`` is a pure
function of ``(key, i)``, so any block of draws can be regenerated on any
worker in any order, which is what makes Monte Carlo results independent of
the thread count.

Normals use Box-Muller on consecutive word pairs: pair ``p`` consumes words
``2p`` (radius) and ``2p + 1`` (angle) and yields the cosine and sine
variates in that order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels

_GOLDEN = 0x9E3779B97F4A7C15
_MASK = (1 << 64) - 1


def _fmix(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def derive_key(seed: int, stream_id: int) -> int:
    """Mix a user seed and a stream id into a 64-bit stream key."""
    a = _fmix(int(seed) + _GOLDEN)
    b = _fmix(int(stream_id) + 2 * _GOLDEN)
    return _fmix(a ^ b)


@dataclass
class RngStream:
    """Seeded, splittable stream of uniform and normal variates.

    Parameters
    ----------
    seed : int
        Any non-negative integer (reduced mod 2**64).
    stream_id : int
        Selects an independent stream for the same seed.
    """

    seed: int
    stream_id: int = 0
    position: int = 0
    key: int = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.seed < 0 or self.stream_id < 0:
            raise ValueError("seed and stream_id must be non-negative")
        self.key = derive_key(self.seed, self.stream_id)

    def substream(self, j: int) -> "RngStream":
        """Independent child stream number ``j``."""
        return RngStream(seed=self.key, stream_id=int(j))

    def skip(self, words: int) -> None:
        self.position += int(words)

    def uniform_rows(self, count: int, width: int) -> np.ndarray:
        out = np.empty((int(count), int(width)))
        kernels.fill_uniform_rows(np.uint64(self.key), np.uint64(self.position), int(width), out)
        self.position += int(count) * int(width)
        return out

    def uniform(self, size: int) -> np.ndarray:
        """``size`` uniforms on the open interval (0, 1)."""
        return self.uniform_rows(1, size)[0]

    def normal_rows(self, count: int, width: int) -> np.ndarray:
        """A (count, width) array of standard normals.

        Row ``j`` is exactly what ``normal(width)`` would have returned on its
        ``j``-th call, so batched and one-at-a-time sampling agree.
        """
        stride = 2 * ((int(width) + 1) // 2)
        out = np.empty((int(count), int(width)))
        kernels.fill_normal_rows(np.uint64(self.key), np.uint64(self.position), stride, out)
        self.position += int(count) * stride
        return out

    def normal(self, size: int) -> np.ndarray:
        return self.normal_rows(1, size)[0]
