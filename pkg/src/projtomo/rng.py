"""Seeded, splittable random streams."""

from __future__ import annotations

import numpy as np


class SeededRng:
    """A numpy generator keyed by ``(seed, stream)``.

    Two instances built from the same pair produce identical draw
    sequences.  ``spawn`` derives an independent child stream, which is how
    per-trial randomness is split off in the experiment harness.
    """

    __slots__ = ("seed", "stream", "gen")

    def __init__(self, seed: int = 0, stream: int = 0) -> None:
        if seed < 0 or stream < 0 or seed >= 2**64 or stream >= 2**64:
            raise ValueError("seed and stream must be unsigned 64-bit integers")
        self.seed = int(seed)
        self.stream = int(stream)
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream,))
        self.gen = np.random.Generator(np.random.PCG64(ss))

    def spawn(self, index: int) -> SeededRng:
        """Child stream ``index`` of this stream (deterministic, independent)."""
        child = SeededRng.__new__(SeededRng)
        child.seed = self.seed
        child.stream = self.stream
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream, int(index)))
        child.gen = np.random.Generator(np.random.PCG64(ss))
        return child

    def __repr__(self) -> str:
        return f"SeededRng(seed={self.seed}, stream={self.stream})"


def as_generator(rng: SeededRng | np.random.Generator | int | None) -> np.random.Generator:
    if isinstance(rng, SeededRng):
        return rng.gen
    if isinstance(rng, np.random.Generator):
        return rng
    if rng is None:
        raise ValueError("a seeded rng is required")
    return SeededRng(int(rng)).gen
