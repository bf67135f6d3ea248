"""
Expected dual-gap bounds for private gossip.

theorem_bound evaluates, for every horizon j = 1..k,

    rho^j * gap0 + S * sum_{t=1}^{j} rho^(j-t) * psi^t,   S = sum(d_i sigma2_i) / (4m)

and corollary_bound the relaxed form obtained with phi_i = sqrt(1 - gamma / d_i):

    (1 - min(alpha / 2m, gamma / m))^j * (gap0 + S * j).
"""

import math
from typing import List, Optional

import numpy as np

from private_gossip.simulation.state import NoiseParams
from private_gossip.theory.rates import corollary_schedule, noise_rates, rho
from private_gossip.theory.schemas import BoundCurve
from private_gossip.topology.graph import Graph
from private_gossip.topology.spectral import algebraic_connectivity
from private_gossip.utils.errors import InvalidParameterError


def noise_scale(g: Graph, p: NoiseParams) -> float:
    """sum(d_i sigma2_i) / (4m)."""
    return math.fsum(d * s2 for d, s2 in zip(g.degrees, p.sigma2)) / (4 * g.m)


def _check(k: int, gap0: float) -> None:
    if k < 1:
        raise InvalidParameterError(f"horizon must be at least 1, got {k}")
    if not gap0 >= 0.0:
        raise InvalidParameterError(f"initial gap must be nonnegative, got {gap0}")


def _psi_series(k: int, g: Graph, p: NoiseParams) -> np.ndarray:
    """psi^1 .. psi^k, or zeros when no node injects noise."""
    weights = np.array([d * s2 for d, s2 in zip(g.degrees, p.sigma2)], dtype=float)
    total = weights.sum()
    if total == 0.0:
        return np.zeros(k)
    rates = np.array(noise_rates(g, p), dtype=float)
    series = np.empty(k)
    powers = np.ones_like(rates)
    for j in range(k):
        powers *= rates
        series[j] = weights @ powers / total
    return series


def noise_sum(j: int, g: Graph, p: NoiseParams, base: Optional[float] = None) -> float:
    """
    sum_{t=1}^{j} base^(j-t) psi^t for a single horizon, accumulated from the
    last term back to the first.
    """
    if j < 1:
        raise InvalidParameterError(f"horizon must be at least 1, got {j}")
    if base is None:
        base = rho(g)
    series = _psi_series(j, g, p)
    return math.fsum(base ** (j - t) * series[t - 1] for t in range(j, 0, -1))


def theorem_bound(k: int, g: Graph, p: NoiseParams, gap0: float) -> BoundCurve:
    """
    Bound curve for horizons 1..k.

    The noise sums follow N_j = rho * N_(j-1) + psi^j, a recurrence of
    nonnegative terms.
    """
    _check(k, gap0)
    if p.n != g.n:
        raise InvalidParameterError(f"noise parameters cover {p.n} nodes, graph has {g.n}")
    base = rho(g)
    scale = noise_scale(g, p)
    series = _psi_series(k, g, p)

    values: List[float] = []
    accumulated = 0.0
    decay = 1.0
    for j in range(k):
        accumulated = base * accumulated + series[j]
        decay *= base
        values.append(decay * gap0 + scale * accumulated)
    return BoundCurve(values=values, gap0=gap0, noise_scale=scale, base_rate=base)


def corollary_bound(k: int, g: Graph, p: NoiseParams, gap0: float, gamma: float) -> BoundCurve:
    """
    Bound curve when every node uses phi_i = sqrt(1 - gamma / d_i).

    Only the variances of ``p`` are used; its decay rates are replaced by the
    schedule.
    """
    _check(k, gap0)
    corollary_schedule(g, gamma)
    alpha = algebraic_connectivity(g).algebraic_connectivity
    base = 1.0 - min(alpha / (2 * g.m), gamma / g.m)
    scale = noise_scale(g, p)
    values = [base ** j * (gap0 + scale * j) for j in range(1, k + 1)]
    return BoundCurve(values=values, gap0=gap0, noise_scale=scale, base_rate=base)


def corollary_params(g: Graph, sigma2: List[float], gamma: float) -> NoiseParams:
    """NoiseParams with the given variances and the corollary decay schedule."""
    return NoiseParams(sigma2=tuple(sigma2), phi=tuple(corollary_schedule(g, gamma)))
