"""Pinned, portable pseudo-random number generation.

Every stochastic routine in this package draws from the xoshiro256**
generator seeded through the splitmix64 mixer, both implemented here with
their published reference constants.  Pinning the algorithm (rather than
delegating to a library generator whose stream may change between releases)
makes every seed reproduce bit-identically across platforms and versions.
"""

from __future__ import annotations

import math

__all__ = ["SeededRng", "derive_seed"]

_MASK64 = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15  # splitmix64 increment


def _mix64(z: int) -> int:
    """splitmix64 output mixer (Steele, Lea & Flood reference constants)."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, *salts: int) -> int:
    """Derive a child seed from ``seed`` and a tuple of integer salts.

    The derivation is a pinned splitmix64-style absorption: each salt is
    multiplied by the golden-ratio increment, xor-ed into the state and
    mixed.  Distinct salt tuples give statistically independent streams.
    """
    state = seed & _MASK64
    for salt in salts:
        state = _mix64(state ^ ((salt & _MASK64) * _GOLDEN & _MASK64))
    return state


class SeededRng:
    """xoshiro256** stream with helpers for the draws used in this package.

    The four 64-bit state words are filled from the seed by splitmix64, as
    recommended by the xoshiro authors, so any 64-bit integer is a valid
    seed (including 0).
    """

    __slots__ = ("_s0", "_s1", "_s2", "_s3")

    def __init__(self, seed: int) -> None:
        state = seed & _MASK64
        words = []
        for _ in range(4):
            state = (state + _GOLDEN) & _MASK64
            words.append(_mix64(state))
        if not any(words):  # all-zero state is the one forbidden xoshiro state
            words[0] = 1
        self._s0, self._s1, self._s2, self._s3 = words

    def next_u64(self) -> int:
        """Next raw 64-bit output of xoshiro256**."""
        s0, s1, s2, s3 = self._s0, self._s1, self._s2, self._s3
        r = (s1 * 5) & _MASK64
        r = (((r << 7) | (r >> 57)) & _MASK64) * 9 & _MASK64
        t = (s1 << 17) & _MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = ((s3 << 45) | (s3 >> 19)) & _MASK64
        self._s0, self._s1, self._s2, self._s3 = s0, s1, s2, s3
        return r

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 random mantissa bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def randrange(self, bound: int) -> int:
        """Uniform integer in [0, bound) via unbiased bitmask rejection."""
        if bound <= 0:
            raise ValueError(f"randrange bound must be positive, got {bound}")
        if bound == 1:
            return 0
        mask = (1 << (bound - 1).bit_length()) - 1
        while True:
            r = self.next_u64() & mask
            if r < bound:
                return r

    def sample(self, n: int, k: int) -> list[int]:
        """Draw ``k`` distinct integers from [0, n) uniformly, in draw order.

        Partial Fisher-Yates over a sparse (dict-backed) permutation, so the
        cost is O(k) regardless of n.
        """
        if not 0 <= k <= n:
            raise ValueError(f"cannot sample {k} distinct values from range({n})")
        swaps: dict[int, int] = {}
        out = []
        for i in range(k):
            j = i + self.randrange(n - i)
            out.append(swaps.get(j, j))
            swaps[j] = swaps.get(i, i)
        return out

    def geometric_skip(self, p: float) -> int:
        """Number of failures before the first success of a Bernoulli(p) trial.

        Used for gap-skipping enumeration of sparse Bernoulli processes.
        Requires 0 < p < 1.
        """
        u = 1.0 - self.random()  # u in (0, 1]
        return int(math.log(u) / math.log1p(-p))
