"""Self-contained deterministic random number generation.

Benchmark games must be reproducible from a single integer seed across
platforms and library versions, so this module fixes the full generation
pipeline instead of relying on ``numpy.random`` internals:

1. ``splitmix64(seed)`` expands the user seed into the four 64-bit words
   of the xoshiro256** state (four successive splitmix64 outputs).
2. ``xoshiro256**`` produces the raw 64-bit stream.
3. Uniform doubles take the top 53 bits: ``u = (word >> 11) * 2**-53``,
   so ``u`` lies in [0, 1).
4. Gaussians use the Box-Muller cosine branch, one draw per two uniforms:
   ``z = sqrt(-2*ln(1 - u1)) * cos(2*pi*u2)``          (``1 - u1`` > 0)
   The sine branch is never used; nothing is cached between draws.

All integer arithmetic is modulo 2**64. Matrices are filled row-major.
"""

from __future__ import annotations

import math

_MASK = 0xFFFFFFFFFFFFFFFF

_TWO_PI = 2.0 * math.pi


def _splitmix64_next(state: int) -> tuple[int, int]:
    state = (state + 0x9E3779B97F4A7C15) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    z = z ^ (z >> 31)
    return z, state


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK


class Xoshiro256StarStar:
    """xoshiro256** seeded via splitmix64, with uniform and Gaussian output."""

    def __init__(self, seed: int):
        if seed < 0:
            raise ValueError("seed must be a non-negative integer")
        state = seed & _MASK
        s = []
        for _ in range(4):
            word, state = _splitmix64_next(state)
            s.append(word)
        self._s = s

    def next_uint64(self) -> int:
        s = self._s
        result = (_rotl((s[1] * 5) & _MASK, 7) * 9) & _MASK
        t = (s[1] << 17) & _MASK
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def next_uniform(self) -> float:
        # top 53 bits -> [0, 1)
        return (self.next_uint64() >> 11) * 2.0 ** -53

    def next_gaussian(self) -> float:
        u1 = self.next_uniform()
        u2 = self.next_uniform()
        return math.sqrt(-2.0 * math.log(1.0 - u1)) * math.cos(_TWO_PI * u2)


def splitmix64_stream(seed: int, n: int) -> list[int]:
    """First ``n`` splitmix64 outputs for ``seed``; exposed for audits."""
    state = seed & _MASK
    out = []
    for _ in range(n):
        word, state = _splitmix64_next(state)
        out.append(word)
    return out
