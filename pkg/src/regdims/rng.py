"""Deterministic 64-bit random number generation.

All stochastic steps in this package (sample drawing, random fixtures,
weak-learner subset selection) run on SplitMix64, the output-scrambled
64-bit LCG of Steele, Lea and Flea (JDK ``SplittableRandom``).  It is
tiny, portable and produces identical streams on every platform and
Python version, which is what the determinism contract of the CLI needs.
"""

from __future__ import annotations

from fractions import Fraction

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

TWO64 = 1 << 64


def _mix(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK
    return z ^ (z >> 31)


class SplitMix64:
    """SplitMix64 stream seeded by an arbitrary integer."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK
        return _mix(self._state)

    def next_fraction(self) -> Fraction:
        """Uniform rational k/2^64 with k a fresh 64-bit draw."""
        return Fraction(self.next_u64(), TWO64)

    def next_below(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection (n must fit in 64 bits)."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = TWO64 - TWO64 % n
        while True:
            u = self.next_u64()
            if u < limit:
                return u % n

    def spawn(self, *salts: int) -> "SplitMix64":
        """Derive an independent child stream from this seed and salts.

        Children depend only on the parent's seed and the salts, not on
        how much of the parent stream was consumed, so per-repetition
        streams are reproducible regardless of execution order.
        """
        z = self._state
        for s in salts:
            z = _mix((z ^ _mix(s & _MASK)) & _MASK)
        return SplitMix64(z)
