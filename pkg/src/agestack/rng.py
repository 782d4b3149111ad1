"""Project PRNG: a fully specified SplitMix64 stream.

Every seeded operation in this package (dataset curation, fold shuffling,
bootstrap resampling, simulator noise) draws from this generator rather
than from the platform RNG, so that a reimplementation in any language
reproduces identical samples from the same seed.

Algorithm (all arithmetic mod 2**64):

    state += 0x9E3779B97F4A7C15
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    output = z ^ (z >> 31)

Derived draws are specified as:

* ``next_float``: top 53 bits of ``next_u64`` scaled by 2**-53, in [0, 1).
* ``next_below(n)``: ``next_u64() % n`` (modulo; bias is negligible for
  the bounds used here and the rule is trivially portable).
* ``normal``: Box-Muller on one uniform pair, cosine branch first, the
  sine branch cached and returned by the following call.
* ``shuffle``: Fisher-Yates from the last index down, partner drawn with
  ``next_below(i + 1)``.

Named substreams are derived by folding an FNV-1a 64 hash of the label
into the seed and taking one SplitMix64 output as the child seed.
"""

from __future__ import annotations

import math

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def fnv1a64(data: bytes) -> int:
    """FNV-1a 64-bit hash, used only to fold stream labels into seeds."""
    h = _FNV_OFFSET
    for byte in data:
        h = ((h ^ byte) * _FNV_PRIME) & _MASK64
    return h


def stream_seed(seed: int, label: str) -> int:
    """Seed for the named substream of ``seed`` (e.g. one per estimator)."""
    return SplitMix64(seed ^ fnv1a64(label.encode("utf-8"))).next_u64()


class SplitMix64:
    """Deterministic 64-bit generator; see the module docstring for spec."""

    __slots__ = ("_state", "_cached_normal")

    def __init__(self, seed: int):
        self._state = seed & _MASK64
        self._cached_normal: float | None = None

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return (z ^ (z >> 31)) & _MASK64

    def next_float(self) -> float:
        """Uniform double in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * 2.0**-53

    def next_below(self, bound: int) -> int:
        """Uniform integer in [0, bound)."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        return self.next_u64() % bound

    def normal(self) -> float:
        """Standard normal draw via the Box-Muller transform."""
        if self._cached_normal is not None:
            z = self._cached_normal
            self._cached_normal = None
            return z
        # 1 - u keeps the log argument in (0, 1], avoiding log(0).
        u1 = 1.0 - self.next_float()
        u2 = self.next_float()
        r = math.sqrt(-2.0 * math.log(u1))
        theta = 2.0 * math.pi * u2
        self._cached_normal = r * math.sin(theta)
        return r * math.cos(theta)

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.next_below(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample_without_replacement(self, items: list, k: int) -> list:
        """First ``k`` elements of a seeded shuffle of ``items``."""
        if k > len(items):
            raise ValueError(f"cannot sample {k} from {len(items)} items")
        pool = list(items)
        self.shuffle(pool)
        return pool[:k]

    def bootstrap_indices(self, n: int, k: int | None = None) -> list[int]:
        """``k`` (default ``n``) index draws in [0, n) with replacement."""
        return [self.next_below(n) for _ in range(n if k is None else k)]

    def spawn(self) -> "SplitMix64":
        """Child generator seeded from the next output of this one."""
        return SplitMix64(self.next_u64())
