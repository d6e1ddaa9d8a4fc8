"""Deterministic random streams.

Every stochastic component draws from a :class:`RandomStream` identified by
``(seed, stream_index)``.  Identical identifiers reproduce identical sample
sequences on every platform (PCG64 seeded through ``SeedSequence``).
Replications use consecutive stream indices of the same seed; the simulator
derives separate arrival/service substreams with a fixed tag so that buffered
block draws stay reproducible.
"""
from __future__ import annotations

import numpy as np


class RandomStream:
    """A named, replayable source of uniforms on (0, 1)."""

    def __init__(self, seed: int, stream_index: int = 0, tag: int = 0):
        self.seed = int(seed)
        self.stream_index = int(stream_index)
        self.tag = int(tag)
        self._gen = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence((self.seed, self.stream_index, self.tag)))
        )

    def substream(self, tag: int) -> "RandomStream":
        """Independent stream derived from the same (seed, index) identity."""
        return RandomStream(self.seed, self.stream_index, tag)

    def next_uniform(self) -> float:
        u = self._gen.random()
        while u == 0.0:  # keep u strictly inside (0, 1)
            u = self._gen.random()
        return u

    def uniform_block(self, n: int) -> np.ndarray:
        """n uniforms in (0, 1); zeros are redrawn deterministically."""
        u = self._gen.random(n)
        zero = u == 0.0
        while zero.any():
            u[zero] = self._gen.random(int(zero.sum()))
            zero = u == 0.0
        return u


def exp_sample(stream: RandomStream, rate: float) -> float:
    """Inverse-CDF exponential draw: -ln(u)/rate for the stream's next u."""
    if rate <= 0:
        raise ValueError(f"rate must be > 0, got {rate}")
    return -np.log(stream.next_uniform()) / rate


def exp_block(stream: RandomStream, rate: float, n: int) -> np.ndarray:
    """Block version of :func:`exp_sample`, same stream semantics."""
    if rate <= 0:
        raise ValueError(f"rate must be > 0, got {rate}")
    return -np.log(stream.uniform_block(n)) / rate
