"""Seeded random streams.

Each stream wraps a numpy PCG64 generator. Uniform draws are returned in
(0, 1] as ``1 - u`` with ``u`` from ``Generator.random`` so that the
inverse-CDF exponential ``-ln(U) / rate`` is always finite.

Replicate streams are derived with SplitMix64: the seed for replicate k
is the (k+1)-th output of a SplitMix64 sequence started at ``seed``,

    z = seed + (k + 1) * 0x9E3779B97F4A7C15            (mod 2**64)
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9            (mod 2**64)
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB            (mod 2**64)
    z = z ^ (z >> 31)
"""
from __future__ import annotations

import math

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB

_BLOCK = 512


def splitmix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, index: int) -> int:
    """Seed of replicate ``index`` under master ``seed``."""
    if index < 0:
        raise ValueError("replicate index must be non-negative")
    return splitmix64((seed & MASK64) + (index + 1) * GOLDEN_GAMMA)


class RngStream:
    """Deterministic stream of uniform and exponential variates.

    Not thread-safe; use one stream per task.
    """

    def __init__(self, seed: int):
        if seed < 0 or seed > MASK64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
        self.seed = int(seed)
        self._gen = np.random.Generator(np.random.PCG64(self.seed))
        self._buf = np.empty(0)
        self._pos = 0
        self.draws = 0

    def spawn(self, index: int) -> "RngStream":
        return RngStream(derive_seed(self.seed, index))

    def uniform(self) -> float:
        if self._pos == len(self._buf):
            self._buf = 1.0 - self._gen.random(_BLOCK)
            self._pos = 0
        u = self._buf[self._pos]
        self._pos += 1
        self.draws += 1
        return float(u)

    def exponential(self, rate: float = 1.0) -> float:
        return -math.log(self.uniform()) / rate
