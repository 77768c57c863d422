"""Reproducible random streams addressed by ``(master_seed, stream_index)``.

Every stream is a fixed window of one Philox counter sequence keyed by the
master seed, so stream ``i`` yields the same numbers whether it is built on
its own or sliced out of a batch. Monte Carlo drivers build streams in
batches (one bulk draw per chunk of trials) to keep per-game overhead low.
"""

from __future__ import annotations

import functools

import numpy as np

# Uniform draws reserved per stream inside the shared sequence. A game that
# needs more spills into a private overflow sequence (see RngStream._spill).
BLOCK = 128
_WORDS_PER_COUNTER = 4
_SEED_LIMIT = 1 << 64


@functools.lru_cache(maxsize=64)
def _philox_key(master_seed: int) -> tuple[int, int]:
    state = np.random.SeedSequence(master_seed).generate_state(2, dtype=np.uint64)
    return int(state[0]), int(state[1])


def _key_int(master_seed: int) -> int:
    lo, hi = _philox_key(master_seed)
    return lo | (hi << 64)


def uniform_blocks(master_seed: int, start: int, count: int) -> np.ndarray:
    """The reserved draws of streams ``start .. start+count-1``, concatenated."""
    _check_seed(master_seed, start)
    bitgen = np.random.Philox(
        key=_key_int(master_seed), counter=start * (BLOCK // _WORDS_PER_COUNTER)
    )
    return np.random.Generator(bitgen).random(count * BLOCK)


def _check_seed(master_seed: int, stream_index: int) -> None:
    if not 0 <= master_seed < _SEED_LIMIT:
        raise ValueError(f"master_seed must be a 64-bit unsigned integer, got {master_seed}")
    if not 0 <= stream_index < _SEED_LIMIT:
        raise ValueError(f"stream_index must be in [0, 2**64), got {stream_index}")


class RngStream:
    """Uniform random source for one game.

    Two streams with equal ``(master_seed, stream_index)`` produce identical
    sequences; distinct indices read disjoint parts of the Philox sequence.
    """

    __slots__ = ("master_seed", "stream_index", "_buf", "_pos", "_end", "_spill_gen")

    def __init__(self, master_seed: int, stream_index: int = 0) -> None:
        _check_seed(master_seed, stream_index)
        self.master_seed = master_seed
        self.stream_index = stream_index
        self._buf = uniform_blocks(master_seed, stream_index, 1).tolist()
        self._pos = 0
        self._end = BLOCK
        self._spill_gen: np.random.Generator | None = None

    @classmethod
    def _view(cls, master_seed: int, stream_index: int, buf: list[float], offset: int) -> RngStream:
        self = cls.__new__(cls)
        self.master_seed = master_seed
        self.stream_index = stream_index
        self._buf = buf
        self._pos = offset
        self._end = offset + BLOCK
        self._spill_gen = None
        return self

    @classmethod
    def batch(cls, master_seed: int, start: int, count: int) -> list[RngStream]:
        """Streams ``start .. start+count-1`` built from a single bulk draw."""
        if count <= 0:
            return []
        buf = uniform_blocks(master_seed, start, count).tolist()
        return [cls._view(master_seed, start + i, buf, i * BLOCK) for i in range(count)]

    def random(self) -> float:
        """Uniform float in [0, 1)."""
        pos = self._pos
        if pos < self._end:
            self._pos = pos + 1
            return self._buf[pos]
        return self._spill()

    def below(self, k: int) -> int:
        """Uniform integer in ``range(k)``."""
        return int(self.random() * k)

    def coin(self) -> bool:
        return self.random() < 0.5

    def bernoulli(self, p) -> bool:
        """True with probability ``p`` (compared as a float)."""
        return self.random() < float(p)

    def choice(self, seq):
        return seq[int(self.random() * len(seq))]

    def _spill(self) -> float:
        # Counter words above bit 128 are never reached by the shared
        # sequence, so each stream's overflow region is private to it.
        if self._spill_gen is None:
            counter = (self.stream_index + 1) << 128
            self._spill_gen = np.random.Generator(
                np.random.Philox(key=_key_int(self.master_seed), counter=counter)
            )
        self._buf = self._spill_gen.random(BLOCK).tolist()
        self._pos = 1
        self._end = BLOCK
        return self._buf[0]

    def __repr__(self) -> str:
        return f"RngStream(master_seed={self.master_seed}, stream_index={self.stream_index})"
