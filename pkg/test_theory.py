#!/usr/bin/env python3
"""
Rate and bound calculator tests.
"""

import math
import os
import sys

import numpy as np
import pytest

sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from private_gossip.harness.experiment import resolve_topology
from private_gossip.harness.schemas import ExperimentConfig
from private_gossip.simulation.state import NoiseParams
from private_gossip.theory.bounds import (
    corollary_bound,
    corollary_params,
    noise_scale,
    noise_sum,
    theorem_bound,
)
from private_gossip.theory.duality import (
    dual_objective,
    initial_dual_gap,
    optimal_dual,
    primal_from_dual,
    primal_objective,
)
from private_gossip.theory.rates import (
    corollary_schedule,
    dominant_psi,
    dominant_set,
    noise_rate,
    psi,
    rate_report,
    rho,
    threshold_phi,
)
from private_gossip.topology.graph import Graph, build_complete, build_cycle, build_path
from private_gossip.topology.spectral import algebraic_connectivity
from private_gossip.utils.errors import ConnectivityError, DegenerateInputError, InvalidParameterError

ALPHA_C10 = 2.0 * (1.0 - math.cos(2.0 * math.pi / 10))


def test_rho():
    print("📐 rho")
    assert rho(build_cycle(10)) == pytest.approx(0.9809017, abs=1e-7)
    assert rho(build_cycle(10)) == pytest.approx(1.0 - ALPHA_C10 / 20, abs=1e-12)
    assert rho(build_path(2)) == pytest.approx(0.0, abs=1e-12)
    assert rho(build_complete(4)) == pytest.approx(2.0 / 3.0, abs=1e-12)
    with pytest.raises(ConnectivityError):
        rho(Graph(n=4, edges=[(0, 1), (2, 3)]))
    print("✅ rho for C10, P2 and K4")


def test_psi():
    print("📐 psi")
    ring = build_cycle(10)
    params = NoiseParams.uniform(10, 1.0, 0.98)
    assert psi(0, ring, params) == pytest.approx(1.0, abs=1e-15)
    assert psi(100, ring, params) == pytest.approx(0.99208 ** 100, rel=1e-12)
    assert psi(100, ring, params) == pytest.approx(0.4518, abs=1e-3)

    star = Graph(n=5, edges=[(0, 1), (0, 2), (0, 3), (0, 4)])
    mixed = NoiseParams(sigma2=(1.0, 2.0, 0.5, 1.0, 3.0), phi=(0.9, 0.5, 0.7, 0.2, 0.95))
    values = [psi(t, star, mixed) for t in range(50)]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert all(0.0 < v <= 1.0 for v in values)

    with pytest.raises(DegenerateInputError):
        psi(1, ring, NoiseParams.silent(10))
    print("✅ psi normalises, matches the regular-graph closed form and decreases")


def test_dominant_set():
    ring = build_cycle(10)
    uniform = NoiseParams.uniform(10, 1.0, 0.9)
    assert dominant_set(ring, uniform) == list(range(10))
    assert dominant_psi(30, ring, uniform) == pytest.approx(psi(30, ring, uniform), rel=1e-12)

    phis = [0.5] * 10
    phis[3] = 0.99
    single = NoiseParams(sigma2=(1.0,) * 10, phi=tuple(phis))
    assert dominant_set(ring, single) == [3]
    late = 2000
    assert dominant_psi(late, ring, single) == pytest.approx(psi(late, ring, single), rel=1e-6)


def test_threshold_identity():
    print("📐 threshold identity")
    ring = build_cycle(10)
    assert threshold_phi(ring)[0] == pytest.approx(0.951057, abs=1e-6)
    assert threshold_phi(build_path(2)) == [0.0, 0.0]

    rgg, _ = resolve_topology(ExperimentConfig(graph="rgg", n=50, radius=0.3, graph_seed=7))
    for g in (ring, build_complete(5), build_path(6), rgg):
        base = rho(g)
        for d, phi in zip(g.degrees, threshold_phi(g)):
            assert abs(noise_rate(d, g.m, phi) - base) <= 1e-14
    print("✅ noise_rate(threshold_phi) = rho on C10, K5, P6 and an RGG")


def test_rate_report_regimes():
    print("📐 regimes")
    ring = build_cycle(10)
    calm = rate_report(ring, NoiseParams.uniform(10, 1.0, 0.9))
    assert calm.noise_rates[0] == pytest.approx(0.962, abs=1e-12)
    assert calm.regime == "gossip-driven"
    assert calm.asymptotic_rate == pytest.approx(calm.rho)

    loud = rate_report(ring, NoiseParams.uniform(10, 1.0, 0.98))
    assert loud.dominant_rate == pytest.approx(0.99208, abs=1e-12)
    assert loud.regime == "noise-driven"
    assert loud.dominant_set == list(range(10))

    scaled = rate_report(ring, NoiseParams.uniform(10, 25.0, 0.98))
    assert scaled.regime == loud.regime
    assert scaled.dominant_rate == loud.dominant_rate
    print("✅ phi = 0.9 gossip-driven, phi = 0.98 noise-driven")


def test_theorem_bound():
    print("📐 theorem bound")
    ring = build_cycle(10)
    base = rho(ring)

    silent = theorem_bound(50, ring, NoiseParams.silent(10), 2.0)
    for j, value in enumerate(silent.values, start=1):
        assert value == pytest.approx(2.0 * base ** j, rel=1e-12)

    params = NoiseParams.uniform(10, 1.0, 0.9)
    single = theorem_bound(1, ring, params, 0.0)
    assert single.values[0] == pytest.approx(noise_scale(ring, params) * psi(1, ring, params), rel=1e-13)

    curve = theorem_bound(400, ring, params, 1.5)
    assert all(v >= 0.0 for v in curve.values)
    assert curve.noise_scale == pytest.approx(20 / 40)

    with pytest.raises(InvalidParameterError):
        theorem_bound(0, ring, params, 1.0)
    with pytest.raises(InvalidParameterError):
        theorem_bound(10, ring, params, -1.0)
    print("✅ bound reduces to gap0 rho^k without noise")


def test_noise_sum_closed_form():
    print("📐 noise sums")
    ring = build_cycle(10)
    params = NoiseParams.uniform(10, 1.0, 0.0)
    base = rho(ring)
    q = 1.0 - 2.0 / 10
    k = 200
    closed = q * (base ** k - q ** k) / (base - q)
    direct = noise_sum(k, ring, params)
    recurrence = theorem_bound(k, ring, params, 0.0).values[-1] / noise_scale(ring, params)
    assert direct == pytest.approx(closed, rel=1e-12)
    assert recurrence == pytest.approx(closed, rel=1e-12)
    print("✅ direct sum, recurrence and closed form agree")


def test_corollary_bound():
    print("📐 corollary bound")
    ring = build_cycle(10)
    alpha = algebraic_connectivity(ring).algebraic_connectivity
    gamma = alpha / 2
    params = corollary_params(ring, [1.0] * 10, gamma)
    gap0 = 0.8

    relaxed = corollary_bound(100, ring, params, gap0, gamma)
    assert relaxed.base_rate == pytest.approx(rho(ring), abs=1e-15)
    exact = theorem_bound(100, ring, params, gap0)
    for a, b in zip(relaxed.values, exact.values):
        assert a >= b * (1 - 1e-12)

    assert corollary_schedule(ring, 2.0) == [0.0] * 10
    with pytest.raises(InvalidParameterError):
        corollary_schedule(ring, 2.5)
    with pytest.raises(InvalidParameterError):
        corollary_bound(10, ring, params, gap0, 0.0)
    print("✅ corollary curve dominates the theorem curve")


def test_duality():
    print("📐 duality")
    g = Graph(n=6, edges=[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5), (1, 4)])
    x0 = [0.3, -1.2, 2.5, 0.0, 4.1, -0.7]
    mean = np.mean(x0)

    assert dual_objective(g, np.zeros(g.m), x0) == 0.0
    y_star = optimal_dual(g, x0)
    assert np.allclose(primal_from_dual(g, y_star, x0), mean, atol=1e-10)

    gap0 = initial_dual_gap(x0)
    assert dual_objective(g, y_star, x0) == pytest.approx(gap0, rel=1e-10)
    assert primal_objective([mean] * g.n, x0) == pytest.approx(gap0, rel=1e-12)

    rng = np.random.default_rng(5)
    for _ in range(20):
        y = rng.normal(size=g.m)
        assert dual_objective(g, y, x0) <= gap0 + 1e-10
    print("✅ D(y*) - D(0) = 1/2 ||x0 - x*||^2")


if __name__ == "__main__":
    print("🧪 Theory Tests")
    print("=" * 50)
    sys.exit(pytest.main([__file__, "-v", "-s"]))
