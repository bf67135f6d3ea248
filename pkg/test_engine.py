#!/usr/bin/env python3
"""
Private gossip engine tests.

Covers the noise schedule of a single node, the pairwise update, the
bookkeeping identities (sum conservation, counters, locality), the noiseless
reduction to standard gossip and the variance of the mean drift.
"""

import math
import os
import sys

import numpy as np
import pytest

sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from private_gossip.simulation.baseline import baseline_run, kaczmarz_gossip, standard_gossip
from private_gossip.simulation.engine import (
    draw_noise,
    drift_variance,
    init,
    mean_drift,
    record,
    relative_error,
    run,
    step,
    sum_defect,
)
from private_gossip.simulation.randomness import Purpose, RandomStream, edge_sequence, gaussian
from private_gossip.simulation.state import NoiseParams
from private_gossip.topology.graph import build_cycle, build_path, build_random_geometric
from private_gossip.utils.errors import ConnectivityError, DegenerateInputError, InvalidParameterError


def _uniform_values(n, seed):
    return RandomStream(seed).substream(Purpose.INITIAL).uniform_array(n).tolist()


def _connected_rgg(n, seed):
    radius = math.sqrt(math.log(n) / n)
    while True:
        try:
            return build_random_geometric(n, radius, seed)
        except ConnectivityError:
            seed += 1


def test_init():
    print("⚙️ init")
    g = build_path(2)
    state = init(g, [0.0, 1.0], NoiseParams.silent(2))
    assert state.x == [0.0, 1.0]
    assert state.target == (0.5, 0.5)
    assert state.t == [0, 0]
    assert state.outstanding == [0.0, 0.0]

    ring = build_cycle(10)
    state = init(ring, [float(i) for i in range(1, 11)], NoiseParams.uniform(10, 1.0, 0.5))
    assert state.mean == 5.5
    assert all(node.outstanding == 0.0 and node.t == 0 for node in state.nodes)

    flat = init(ring, [2.0] * 10, NoiseParams.silent(10))
    assert list(flat.target) == flat.x

    with pytest.raises(InvalidParameterError):
        init(ring, [1.0] * 9, NoiseParams.silent(10))
    with pytest.raises(InvalidParameterError):
        init(ring, [1.0] * 10, NoiseParams.silent(9))
    with pytest.raises(InvalidParameterError):
        NoiseParams.uniform(10, 1.0, 1.0)
    with pytest.raises(InvalidParameterError):
        NoiseParams.uniform(10, -1.0, 0.5)
    print("✅ x0 = c, counters and outstanding noise start at zero")


def test_draw_noise_schedule():
    print("⚙️ draw_noise")
    g = build_cycle(4)
    state = init(g, [1.0, 2.0, 3.0, 4.0], NoiseParams.uniform(4, 1.0, 0.7))
    s = RandomStream(42)
    reference = RandomStream(42).substream(Purpose.NOISE, 1)

    w, node = draw_noise(state, 1, s)
    v0 = gaussian(reference, 1.0)
    assert w == v0
    assert node.t == 1 and node.outstanding == v0 and node.x == 2.0
    assert state.t[1] == 0
    state.set_node(1, node)

    w, node = draw_noise(state, 1, s)
    v1 = gaussian(reference, 1.0)
    assert w == 0.7 * v1 - v0
    assert node.t == 2 and node.outstanding == 0.7 * v1
    print("✅ w = phi^t v - previous injection")


def test_draw_noise_degenerate():
    g = build_cycle(3)
    silent = init(g, [0.0, 1.0, 2.0], NoiseParams.silent(3))
    s = RandomStream(1)
    for _ in range(3):
        w, node = draw_noise(silent, 0, s)
        assert w == 0.0 and node.outstanding == 0.0
        silent.set_node(0, node)
    assert silent.t[0] == 3

    state = init(g, [0.0, 1.0, 2.0], NoiseParams.uniform(3, 1.0, 0.0))
    injected = []
    for _ in range(4):
        w, node = draw_noise(state, 2, s)
        injected.append(w)
        state.set_node(2, node)
    assert injected[0] != 0.0
    assert injected[0] + injected[1] == 0.0
    assert injected[2] == 0.0 and injected[3] == 0.0

    with pytest.raises(InvalidParameterError):
        draw_noise(state, 3, s)


def test_step_and_relative_error():
    print("⚙️ step")
    g = build_path(2)
    state = init(g, [0.0, 1.0], NoiseParams.silent(2))
    assert relative_error(state) == 1.0
    step(state, RandomStream(0))
    assert state.x == [0.5, 0.5]
    assert relative_error(state) == 0.0
    assert state.iteration == 1 and state.t == [1, 1]

    flat = init(build_cycle(5), [1.0] * 5, NoiseParams.silent(5))
    with pytest.raises(DegenerateInputError):
        relative_error(flat)
    print("✅ noiseless two-node step lands on consensus")


def test_locality():
    print("⚙️ locality")
    g = build_cycle(10)
    state = init(g, _uniform_values(10, 3), NoiseParams.uniform(10, 1.0, 0.9))
    s = RandomStream(3)
    for _ in range(200):
        before = state.copy()
        step(state, s)
        touched = [i for i in range(10) if state.t[i] != before.t[i]]
        assert len(touched) == 2
        i, j = touched
        assert (i, j) in g.edges
        assert state.x[i] == state.x[j]
        for k in range(10):
            if k not in touched:
                assert state.x[k] == before.x[k]
                assert state.outstanding[k] == before.outstanding[k]
    print("✅ only the sampled endpoints change")


def test_counter_law():
    print("⚙️ counters")
    g = build_cycle(10)
    k = 1000
    state = init(g, _uniform_values(10, 4), NoiseParams.uniform(10, 1.0, 0.5))
    run(state, k, RandomStream(4))
    assert sum(state.t) == 2 * k
    expected = [0] * 10
    for e in edge_sequence(RandomStream(4), g.m, k):
        i, j = g.edges[e]
        expected[i] += 1
        expected[j] += 1
    assert state.t == expected
    print("✅ sum of counters = 2k, counters match the replayed edges")


def test_telescoping_conservation():
    print("⚙️ telescoping")
    g = _connected_rgg(100, 0)
    c = _uniform_values(g.n, 11)
    state = init(g, c, NoiseParams.uniform(g.n, 1.0, 0.9))
    tolerance = 1e-8
    defects = []
    drifts = []

    def probe(rec):
        defects.append(abs(sum_defect(state)))
        drifts.append(abs(rec.mean_drift - rec.outstanding_sum / g.n))

    run(state, 100_000, RandomStream(11), probe, stride=100)
    assert max(defects) <= tolerance
    assert max(drifts) <= 1e-10
    print(f"✅ max |sum(x) - sum(c) - sum(outstanding)| = {max(defects):.2e}")


def test_injected_noise_matches_outstanding():
    g = build_cycle(10)
    state = init(g, _uniform_values(10, 5), NoiseParams.uniform(10, 2.0, 0.8))
    s = RandomStream(5)
    for _ in range(500):
        step(state, s)
        assert abs(state.injected - math.fsum(state.outstanding)) <= 1e-10


def test_baseline_reduction():
    print("⚙️ baseline reduction")
    k = 3000
    for g in (build_cycle(10), build_path(5)):
        c = _uniform_values(g.n, 21)
        state = init(g, c, NoiseParams.silent(g.n))
        run(state, k, RandomStream(21))

        edges = edge_sequence(RandomStream(21), g.m, k)
        expected = standard_gossip(g, c, edges)
        assert state.x == expected

        projected = kaczmarz_gossip(g, c, edges)
        assert np.allclose(projected, expected, rtol=0.0, atol=1e-12)
    print("✅ sigma = 0 reproduces standard gossip exactly")


def test_baseline_run_matches_engine_records():
    g = build_cycle(10)
    c = _uniform_values(10, 8)
    private = []
    baseline = []
    run(init(g, c, NoiseParams.silent(10)), 400, RandomStream(8), private.append, stride=7)
    baseline_run(g, c, 400, RandomStream(8), baseline.append, stride=7)
    assert [r.t for r in private] == [r.t for r in baseline]
    assert [r.relative_error for r in private] == [r.relative_error for r in baseline]
    assert all(abs(r.mean_drift) < 1e-14 for r in private)


def test_run_edge_cases():
    g = build_cycle(5)
    state = init(g, [1.0, 2.0, 3.0, 4.0, 5.0], NoiseParams.uniform(5, 1.0, 0.5))
    records = []
    run(state, 0, RandomStream(0), records.append)
    assert state.x == [1.0, 2.0, 3.0, 4.0, 5.0]
    assert [r.t for r in records] == [0]
    assert records[0].relative_error == 1.0

    records.clear()
    run(state, 10, RandomStream(0), records.append, stride=4)
    assert [r.t for r in records] == [0, 4, 8, 10]
    assert record(state).t == 10

    with pytest.raises(InvalidParameterError):
        run(state, -1, RandomStream(0))
    with pytest.raises(InvalidParameterError):
        run(state, 1, RandomStream(0), stride=0)


def test_convergent_regime():
    print("⚙️ convergent regime")
    g = build_cycle(10)
    errors = []
    for seed in range(20):
        state = init(g, _uniform_values(10, seed), NoiseParams.uniform(10, 1.0, 0.5))
        run(state, 10_000, RandomStream(seed))
        errors.append(relative_error(state))
    assert sum(errors) / len(errors) < 1e-4
    print(f"✅ mean relative error after 1e4 steps: {sum(errors) / len(errors):.2e}")


def test_drift_variance_law():
    print("⚙️ mean drift variance")
    g = build_cycle(10)
    params = NoiseParams.uniform(10, 1.0, 0.9)
    c = _uniform_values(10, 99)
    edge_seed = 99
    steps = 500

    drifts = []
    predicted = None
    for noise_seed in range(10_000):
        state = init(g, c, params)
        run(state, steps, RandomStream(edge_seed, noise_seed=noise_seed))
        drifts.append(mean_drift(state))
        if predicted is None:
            predicted = drift_variance(state)
            counters = list(state.t)
        else:
            assert state.t == counters

    empirical = float(np.var(drifts))
    assert abs(empirical - predicted) / predicted < 0.05
    print(f"✅ Var(mean drift): empirical {empirical:.4e}, predicted {predicted:.4e}")


def test_mean_drift_decays():
    print("⚙️ drift second moment")
    g = build_cycle(10)
    early = []
    late = []
    for seed in range(100):
        state = init(g, _uniform_values(10, seed), NoiseParams.uniform(10, 1.0, 0.9))
        s = RandomStream(seed)
        run(state, 100, s)
        early.append(mean_drift(state) ** 2)
        run(state, 9_900, s)
        late.append(mean_drift(state) ** 2)
    assert np.mean(late) < np.mean(early)
    print(f"✅ E[drift^2]: {np.mean(early):.3e} at t=100, {np.mean(late):.3e} at t=1e4")


if __name__ == "__main__":
    print("🧪 Engine Tests")
    print("=" * 50)
    sys.exit(pytest.main([__file__, "-v", "-s"]))
