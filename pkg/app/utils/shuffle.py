"""Seeded shuffling that is identical on every platform and Python version.

The generator is a 64-bit linear congruential generator with Knuth's MMIX
constants; the top 32 bits of each state are used as output.
"""
from collections.abc import Sequence
from typing import TypeVar

T = TypeVar("T")

_MASK64 = (1 << 64) - 1
_MULTIPLIER = 6364136223846793005
_INCREMENT = 1442695040888963407


class Lcg64:
    """64-bit linear congruential generator."""

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u32(self) -> int:
        """Advance the state and return its upper 32 bits."""
        self.state = (self.state * _MULTIPLIER + _INCREMENT) & _MASK64
        return self.state >> 32

    def below(self, bound: int) -> int:
        """Return an integer in [0, bound) by multiply-shift reduction."""
        return (self.next_u32() * bound) >> 32


def seeded_permutation(items: Sequence[T], seed: int) -> list[T]:
    """
    Shuffle a copy of items with Fisher-Yates driven by Lcg64.

    Args:
        items: Items to shuffle
        seed: 64-bit seed

    Returns:
        New shuffled list
    """
    rng = Lcg64(seed)
    shuffled = list(items)
    for i in range(len(shuffled) - 1, 0, -1):
        j = rng.below(i + 1)
        shuffled[i], shuffled[j] = shuffled[j], shuffled[i]
    return shuffled
