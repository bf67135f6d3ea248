"""
Deterministic random streams for gossip simulations.

Every stream is a numpy Philox generator (counter-based) seeded from a
SeedSequence whose spawn key encodes (purpose, index). Two streams with
distinct keys are independent; the same (seed, key) always yields the same
64-bit words, so a simulation is reproducible from its seed alone.

Variates are produced from raw words in Python rather than through numpy's
Generator methods so that the mapping word -> variate is fixed here:
rejection sampling for bounded integers and the polar Box-Muller method for
normals.
"""

import math
from enum import IntEnum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from private_gossip.utils.errors import InvalidParameterError

WORD_SPAN = 1 << 64
_WORD_BLOCK = 512
_UNIT = 2.0 ** -53


class Purpose(IntEnum):
    """Derivation keys for sub-streams."""

    EDGES = 0
    NOISE = 1
    INITIAL = 2
    GEOMETRY = 3


class RandomStream:
    """
    A single-owner source of uniform words, bounded integers and normals.

    Sub-streams are derived with ``substream(purpose, index)`` and cached, so
    asking twice for the same key returns the same object (and continues its
    sequence). When ``noise_seed`` is given, NOISE sub-streams are keyed off
    that seed instead, which lets a caller replay the edge sequence of ``seed``
    while resampling the injected noise.
    """

    def __init__(self, seed: int, key: Sequence[int] = (), noise_seed: Optional[int] = None):
        if not 0 <= int(seed) < WORD_SPAN:
            raise InvalidParameterError(f"seed must be a 64-bit unsigned integer, got {seed}")
        if noise_seed is not None and not 0 <= int(noise_seed) < WORD_SPAN:
            raise InvalidParameterError(f"noise seed must be a 64-bit unsigned integer, got {noise_seed}")

        self.seed = int(seed)
        self.key: Tuple[int, ...] = tuple(int(k) for k in key)
        self.noise_seed = None if noise_seed is None else int(noise_seed)

        sequence = np.random.SeedSequence(self.seed, spawn_key=self.key)
        self._bitgen = np.random.Philox(sequence)
        self._words: List[int] = []
        self._cursor = 0
        self._spare: Optional[float] = None
        self._children: Dict[Tuple[int, int], "RandomStream"] = {}

    def __repr__(self) -> str:
        return f"RandomStream(seed={self.seed}, key={self.key})"

    def substream(self, purpose: Purpose, index: int = 0) -> "RandomStream":
        """Return the (cached) child stream for a (purpose, index) pair."""
        if index < 0:
            raise InvalidParameterError(f"sub-stream index must be nonnegative, got {index}")
        slot = (int(purpose), int(index))
        child = self._children.get(slot)
        if child is None:
            seed = self.seed
            if purpose == Purpose.NOISE and self.noise_seed is not None:
                seed = self.noise_seed
            child = RandomStream(seed, self.key + slot)
            self._children[slot] = child
        return child

    def next_word(self) -> int:
        """Next raw 64-bit word as a Python int."""
        if self._cursor >= len(self._words):
            self._words = self._bitgen.random_raw(_WORD_BLOCK).tolist()
            self._cursor = 0
        word = self._words[self._cursor]
        self._cursor += 1
        return word

    def uniform01(self) -> float:
        """Uniform double in [0, 1) built from the top 53 bits of one word."""
        return (self.next_word() >> 11) * _UNIT

    def uniform_array(self, size: int) -> np.ndarray:
        """``size`` consecutive uniform01 variates as an array."""
        return np.array([self.uniform01() for _ in range(size)], dtype=float)

    def standard_normal(self) -> float:
        """N(0, 1) variate via the polar Box-Muller method (pairs are cached)."""
        if self._spare is not None:
            value, self._spare = self._spare, None
            return value
        while True:
            u = 2.0 * self.uniform01() - 1.0
            v = 2.0 * self.uniform01() - 1.0
            s = u * u + v * v
            if 0.0 < s < 1.0:
                factor = math.sqrt(-2.0 * math.log(s) / s)
                self._spare = v * factor
                return u * factor


def uniform_edge_index(s: RandomStream, m: int) -> int:
    """
    Draw an index uniformly from [0, m).

    Words at or above the largest multiple of m below 2**64 are rejected, so
    the reduction modulo m carries no bias.
    """
    if m < 1:
        raise InvalidParameterError(f"edge count must be at least 1, got {m}")
    limit = WORD_SPAN - (WORD_SPAN % m)
    while True:
        word = s.next_word()
        if word < limit:
            return word % m


def gaussian(s: RandomStream, sigma2: float) -> float:
    """Draw from N(0, sigma2); a zero variance returns exactly 0.0 without consuming words."""
    if not sigma2 >= 0.0 or math.isinf(sigma2):
        raise InvalidParameterError(f"variance must be finite and nonnegative, got {sigma2}")
    if sigma2 == 0.0:
        return 0.0
    return math.sqrt(sigma2) * s.standard_normal()


def edge_sequence(s: RandomStream, m: int, k: int) -> List[int]:
    """The first ``k`` edge indices of the EDGES sub-stream of ``s``."""
    edges = s.substream(Purpose.EDGES)
    return [uniform_edge_index(edges, m) for _ in range(k)]
