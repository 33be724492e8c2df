"""Seeded, counter-based random streams for reproducible simulation."""

from __future__ import annotations

from typing import Tuple

import numpy as np


# Leading spawn-key component per stream family, so agent streams never alias
# initialization or data-split streams.
AGENT_STREAM = 0
INIT_STREAM = 1
DATA_STREAM = 2


class AgentRng:
    """
    Wrapper around a Philox generator keyed by a stream path.

    The path (for example campaign seed, cell, run, agent) is mixed through
    numpy's SeedSequence, which is injective in the spawn key, so distinct
    paths give independent streams and the same path always gives the same
    stream regardless of which process or thread draws from it.
    """

    def __init__(self, seed: int, path: Tuple[int, ...] = ()):
        self._seed = int(seed)
        self._path = tuple(int(p) for p in path)
        sequence = np.random.SeedSequence(self._seed, spawn_key=self._path)
        self._generator = np.random.Generator(np.random.Philox(sequence))

    @classmethod
    def for_agent(cls, master_seed: int, cell: int, run: int, agent: int) -> AgentRng:
        return cls(master_seed, (AGENT_STREAM, cell, run, agent))

    @property
    def seed(self) -> int:
        return self._seed

    @property
    def path(self) -> Tuple[int, ...]:
        return self._path

    @property
    def generator(self) -> np.random.Generator:
        return self._generator

    def substream(self, *path: int) -> AgentRng:
        """Independent child stream below this one."""
        return AgentRng(self._seed, self._path + tuple(path))

    def random(self, size=None, out=None):
        return self._generator.random(size, out=out)

    def uniform(self, low: float, high: float, size=None):
        return self._generator.uniform(low, high, size)

    def standard_normal(self, size=None, out=None):
        return self._generator.standard_normal(size, out=out)

    def integers(self, low: int, high: int, size=None):
        return self._generator.integers(low, high, size)

    def permutation(self, n: int) -> np.ndarray:
        return self._generator.permutation(n)

    def __repr__(self) -> str:
        return f"AgentRng(seed={self._seed}, path={self._path})"
