"""Seeded random streams for reproducible replications.

Every replication owns one independent stream per purpose. Streams are derived
from ``SeedSequence(seed, spawn_key=(replication, purpose_index))`` so drawing
more numbers for one purpose (say, metrics) never shifts another (say, the
protocol rounds).
"""

from __future__ import annotations

from collections.abc import Sequence
from typing import TypeVar

from numpy.random import PCG64, Generator, SeedSequence

T = TypeVar("T")

# Append only: the index of a purpose is part of its seed.
PURPOSES = ("init", "protocol", "scenario", "metrics", "analysis", "service")


class RngStream:
    """Thin wrapper around a numpy ``Generator`` with list-friendly helpers."""

    def __init__(self, seed_sequence: SeedSequence):
        self._gen = Generator(PCG64(seed_sequence))

    @classmethod
    def from_seed(cls, seed: int, replication: int = 0, purpose: str = "protocol") -> RngStream:
        return cls(SeedSequence(seed, spawn_key=(replication, PURPOSES.index(purpose))))

    @property
    def generator(self) -> Generator:
        return self._gen

    def choice(self, seq: Sequence[T]) -> T:
        if not seq:
            raise IndexError("cannot choose from an empty sequence")
        return seq[int(self._gen.integers(len(seq)))]

    def sample(self, seq: Sequence[T], k: int) -> list[T]:
        """``k`` distinct positions of ``seq`` drawn without replacement, in draw order."""
        k = min(k, len(seq))
        if k <= 0:
            return []
        idx = self._gen.choice(len(seq), size=k, replace=False)
        return [seq[i] for i in idx]

    def permutation(self, seq: Sequence[T]) -> list[T]:
        if not seq:
            return []
        return [seq[i] for i in self._gen.permutation(len(seq))]


def spawn_streams(seed: int, replication: int) -> dict[str, RngStream]:
    """One stream per purpose for replication ``replication``."""
    return {purpose: RngStream.from_seed(seed, replication, purpose) for purpose in PURPOSES}
