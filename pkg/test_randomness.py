#!/usr/bin/env python3
"""
Random stream tests: determinism, sub-stream derivation, edge sampling and
Gaussian variates.
"""

import math
import os
import sys

import numpy as np
import pytest

sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from private_gossip.simulation.randomness import (
    Purpose,
    RandomStream,
    edge_sequence,
    gaussian,
    uniform_edge_index,
)
from private_gossip.utils.errors import InvalidParameterError


def _normal_cdf(x: float) -> float:
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


def test_determinism():
    print("🎲 Determinism")
    first = edge_sequence(RandomStream(2024), 10, 100)
    assert first == edge_sequence(RandomStream(2024), 10, 100)
    assert first != edge_sequence(RandomStream(2025), 10, 100)

    a = RandomStream(9).substream(Purpose.NOISE, 3)
    b = RandomStream(9).substream(Purpose.NOISE, 3)
    assert [a.next_word() for _ in range(1000)] == [b.next_word() for _ in range(1000)]
    print("✅ same seed and key give the same words")


def test_substreams():
    print("🎲 Sub-streams")
    root = RandomStream(1)
    assert root.substream(Purpose.EDGES) is root.substream(Purpose.EDGES)

    words = {
        (purpose, index): RandomStream(1).substream(purpose, index).next_word()
        for purpose in Purpose
        for index in range(4)
    }
    assert len(set(words.values())) == len(words)

    replay = RandomStream(5, noise_seed=77)
    plain = RandomStream(5)
    assert edge_sequence(replay, 10, 50) == edge_sequence(plain, 10, 50)
    assert replay.substream(Purpose.NOISE, 0).next_word() != plain.substream(Purpose.NOISE, 0).next_word()

    with pytest.raises(InvalidParameterError):
        root.substream(Purpose.NOISE, -1)
    with pytest.raises(InvalidParameterError):
        RandomStream(-1)
    print("✅ distinct keys give distinct streams; noise_seed only moves NOISE")


def test_uniform01_range():
    s = RandomStream(3)
    values = s.uniform_array(10000)
    assert values.min() >= 0.0
    assert values.max() < 1.0
    assert abs(values.mean() - 0.5) < 0.02


def test_edge_index():
    print("🎲 Edge sampling")
    s = RandomStream(0)
    assert all(uniform_edge_index(s, 1) == 0 for _ in range(100))

    draws = 200_000
    counts = np.bincount(edge_sequence(RandomStream(17), 10, draws), minlength=10)
    frequencies = counts / draws
    assert frequencies.min() >= 0.095
    assert frequencies.max() <= 0.105

    with pytest.raises(InvalidParameterError):
        uniform_edge_index(s, 0)
    print(f"✅ edge frequencies {frequencies.min():.4f}..{frequencies.max():.4f}")


def test_gaussian_moments():
    print("🎲 Gaussian moments")
    s = RandomStream(123)
    samples = np.array([gaussian(s, 1.0) for _ in range(1_000_000)])
    assert abs(samples.mean()) < 0.005
    assert 0.99 < samples.var() < 1.01
    print(f"✅ mean {samples.mean():.5f}, variance {samples.var():.5f}")


def test_gaussian_ks():
    print("🎲 Kolmogorov-Smirnov")
    n = 100_000
    s = RandomStream(456)
    samples = np.sort([gaussian(s, 1.0) for _ in range(n)])
    cdf = np.array([_normal_cdf(x) for x in samples])
    upper = np.arange(1, n + 1) / n - cdf
    lower = cdf - np.arange(0, n) / n
    statistic = max(upper.max(), lower.max())
    critical = 1.628 / math.sqrt(n)
    assert statistic < critical
    print(f"✅ D = {statistic:.5f} < {critical:.5f}")


def test_gaussian_edge_cases():
    s = RandomStream(8)
    reference = RandomStream(8)
    assert gaussian(s, 0.0) == 0.0
    assert s.next_word() == reference.next_word()

    for bad in (-1.0, float("nan"), float("inf")):
        with pytest.raises(InvalidParameterError):
            gaussian(s, bad)


def test_gaussian_scaling():
    wide = RandomStream(31)
    unit = RandomStream(31)
    for _ in range(100):
        assert gaussian(wide, 4.0) == 2.0 * gaussian(unit, 1.0)


if __name__ == "__main__":
    print("🧪 Randomness Tests")
    print("=" * 50)
    sys.exit(pytest.main([__file__, "-v", "-s"]))
