"""Deterministic 64-bit PRNG with a fixed, portable recurrence.

Generated spaces must be byte-identical across runs, platforms, and
reimplementations, so the generator is pinned to splitmix64 rather than
delegating to a runtime's default RNG:

    state_{k+1} = (state_k + 0x9E3779B97F4A7C15) mod 2^64
    z = state_{k+1}
    z = (z XOR (z >> 30)) * 0xBF58476D1CE4E5B9   mod 2^64
    z = (z XOR (z >> 27)) * 0x94D049BB133111EB   mod 2^64
    output = z XOR (z >> 31)

Bounded draws use plain modulo reduction (the tiny bias is irrelevant here;
reproducibility is what matters).
"""

from __future__ import annotations

from typing import Sequence, TypeVar

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15

T = TypeVar("T")


class SplitMix64:
    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform-ish integer in the inclusive range [lo, hi]."""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        return lo + self.next_u64() % (hi - lo + 1)

    def choice(self, seq: Sequence[T]) -> T:
        if not seq:
            raise ValueError("choice from empty sequence")
        return seq[self.randint(0, len(seq) - 1)]

    def weighted_index(self, weights: Sequence[int]) -> int:
        """Index drawn proportionally to non-negative integer weights."""
        total = sum(weights)
        if total <= 0:
            raise ValueError("weights must sum to a positive value")
        pick = self.randint(1, total)
        acc = 0
        for i, w in enumerate(weights):
            acc += w
            if pick <= acc:
                return i
        raise AssertionError("unreachable")

    def fork(self, salt: int) -> "SplitMix64":
        """Independent child stream; used to decorrelate per-instance draws."""
        return SplitMix64(self.next_u64() ^ (salt * _GAMMA) & _MASK)
