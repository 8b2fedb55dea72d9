"""Deterministic pseudorandom primitives shared by all hash algorithms.

Bit-exact SplitMix64 plus the derived samplers (unit interval, exponential,
bounded integer) and a counting wrapper that measures how many 64-bit
outputs a computation consumed. Everything here is a pure function of the
seed, so results are identical across runs and platforms.
"""

from __future__ import annotations

import math

MASK64 = (1 << 64) - 1

_INCREMENT = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

_UNIT_SCALE = 2.0 ** -53


def splitmix64_next(state: int) -> tuple[int, int]:
    """Advance a SplitMix64 state by one step.

    Pure function: returns ``(next_state, output)`` and leaves the input
    untouched, so the same state always yields the same pair.
    """
    state = (state + _INCREMENT) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return state, z ^ (z >> 31)


class SplitMix64:
    """Stateful SplitMix64 generator seeded with a 64-bit value."""

    __slots__ = ("state",)

    def __init__(self, seed: int) -> None:
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state, value = splitmix64_next(self.state)
        return value


class CountingGenerator:
    """Wraps a generator and counts every 64-bit output it produces.

    ``invocations`` increases by exactly one per output and is never
    reset; it is the measurement basis for all consumption experiments.
    """

    __slots__ = ("inner", "invocations")

    def __init__(self, inner: SplitMix64) -> None:
        self.inner = inner
        self.invocations = 0

    @classmethod
    def from_seed(cls, seed: int) -> "CountingGenerator":
        return cls(SplitMix64(seed))

    def next_u64(self) -> int:
        self.invocations += 1
        return self.inner.next_u64()


def next_unit(gen) -> float:
    """Uniform double in [0, 1) from the 53 high bits of one output."""
    return (gen.next_u64() >> 11) * _UNIT_SCALE


def next_exponential(gen) -> float:
    """Exp(1) variate via the inverse CDF -ln(1-u); consumes one output."""
    return -math.log(1.0 - next_unit(gen))


def next_bounded(gen, bound: int) -> int:
    """Unbiased uniform integer in [0, bound).

    bound 1 returns 0 without drawing. Powers of two mask a single
    output. Any other bound multiplies one output into 128 bits and keeps
    the high word, rejecting the biased low fraction (extra draws occur
    with probability < bound / 2**64).
    """
    if bound < 1:
        raise ValueError("bound must be a positive integer")
    if bound == 1:
        return 0
    if bound & (bound - 1) == 0:
        return gen.next_u64() & (bound - 1)
    product = gen.next_u64() * bound
    low = product & MASK64
    if low < bound:
        threshold = ((1 << 64) - bound) % bound
        while low < threshold:
            product = gen.next_u64() * bound
            low = product & MASK64
    return product >> 64
