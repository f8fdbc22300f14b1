"""SplitMix64: the deterministic RNG used everywhere seeds appear.

Chosen because the algorithm fits in a dozen lines and is trivially
portable, so any reimplementation of the bank/template formats can
reproduce draws bit-for-bit.
"""

from __future__ import annotations

from fractions import Fraction

_MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def split(self) -> "SplitMix64":
        return SplitMix64(self.next_u64())

    def randint(self, low: int, high: int) -> int:
        """Uniform integer in [low, high] inclusive."""
        if high < low:
            raise ValueError("empty range")
        span = high - low + 1
        # rejection sampling to kill modulo bias
        limit = (1 << 64) - ((1 << 64) % span)
        while True:
            u = self.next_u64()
            if u < limit:
                return low + (u % span)

    def uniform(self, low: float, high: float) -> float:
        u = self.next_u64() >> 11  # 53 random bits
        return low + (high - low) * (u / float(1 << 53))

    def choice(self, items):
        return items[self.randint(0, len(items) - 1)]

    def fraction(self, num_low: int, num_high: int, den_max: int) -> Fraction:
        return Fraction(self.randint(num_low, num_high), self.randint(1, den_max))
