"""Seedable xoshiro256** streams shared between Python and numba kernels.

The generator state lives in a 4-word ``uint64`` array so that jitted
kernels can advance it in place; Python-side draws go through the same
jitted primitives, which keeps the reference samplers and the fast kernels
on an identical draw sequence for a given seed.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_MASK32 = np.uint64(0xFFFFFFFF)


@njit(cache=True)
def _rotl(x, k):
    return (x << np.uint64(k)) | (x >> np.uint64(64 - k))


@njit(cache=True)
def next_u64(state):
    s0 = state[0]
    s1 = state[1]
    s2 = state[2]
    s3 = state[3]
    result = _rotl(s1 * np.uint64(5), 7) * np.uint64(9)
    t = s1 << np.uint64(17)
    s2 ^= s0
    s3 ^= s1
    s1 ^= s2
    s0 ^= s3
    s2 ^= t
    s3 = _rotl(s3, 45)
    state[0] = s0
    state[1] = s1
    state[2] = s2
    state[3] = s3
    return result


@njit(cache=True)
def randbelow(state, k):
    """Unbiased integer in ``[0, k)`` for ``1 <= k < 2**32`` (Lemire)."""
    bound = np.uint64(k)
    x = next_u64(state) >> np.uint64(32)
    m = x * bound
    low = m & _MASK32
    if low < bound:
        threshold = (np.uint64(0x100000000) - bound) % bound
        while low < threshold:
            x = next_u64(state) >> np.uint64(32)
            m = x * bound
            low = m & _MASK32
    return np.int64(m >> np.uint64(32))


@njit(cache=True)
def uniform01(state):
    return np.float64(next_u64(state) >> np.uint64(11)) * (1.0 / 9007199254740992.0)


def _splitmix64(seed: int) -> np.ndarray:
    mask = (1 << 64) - 1
    x = seed & mask
    words = []
    for _ in range(4):
        x = (x + 0x9E3779B97F4A7C15) & mask
        z = x
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & mask
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & mask
        words.append(z ^ (z >> 31))
    return np.array(words, dtype=np.uint64)


def child_seed(master: int, n: int, replicate: int) -> int:
    """Per-sample 64-bit seed, a pure function of ``(master, n, replicate)``."""
    if master < 0 or n < 0 or replicate < 0:
        raise ValueError("seed components must be non-negative")
    ss = np.random.SeedSequence(master, spawn_key=(n, replicate))
    return int(ss.generate_state(1, np.uint64)[0])


class RngStream:
    """A xoshiro256** stream. Identical seeds give identical draws everywhere."""

    def __init__(self, seed: int):
        if seed < 0:
            raise ValueError("seed must be non-negative")
        self.seed = int(seed)
        self.state = _splitmix64(self.seed)

    def randbelow(self, k: int) -> int:
        if not 1 <= k < 2**32:
            raise ValueError(f"bound out of range: {k}")
        return int(randbelow(self.state, k))

    def random(self) -> float:
        return float(uniform01(self.state))

    def copy(self) -> "RngStream":
        other = RngStream.__new__(RngStream)
        other.seed = self.seed
        other.state = self.state.copy()
        return other

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed})"
