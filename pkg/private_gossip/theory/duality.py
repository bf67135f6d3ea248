"""
Primal and dual objectives of the average consensus projection.

Primal:  min 1/2 ||x - x0||^2  subject to  A x = 0
Dual:    max D(y) = -(A x0)^T y - 1/2 ||A^T y||^2,   x(y) = x0 + A^T y

With y0 = 0 we have D(y0) = 0, and strong duality gives
D(y*) = P(x*) = 1/2 ||x0 - x*||^2 with x* = mean(x0) * 1, which is the
initial gap used by the bound overlays.
"""

import math
from typing import Sequence

import numpy as np

from private_gossip.topology.graph import Graph
from private_gossip.topology.spectral import incidence_matrix
from private_gossip.utils.errors import InvalidParameterError


def _vector(values: Sequence[float], size: int, name: str) -> np.ndarray:
    array = np.asarray(values, dtype=float)
    if array.shape != (size,):
        raise InvalidParameterError(f"{name} must have {size} entries, got shape {array.shape}")
    return array


def primal_objective(x: Sequence[float], x0: Sequence[float]) -> float:
    x0 = np.asarray(x0, dtype=float)
    diff = _vector(x, x0.size, "x") - x0
    return 0.5 * float(diff @ diff)


def dual_objective(g: Graph, y: Sequence[float], x0: Sequence[float]) -> float:
    a = incidence_matrix(g).entries.astype(float)
    y = _vector(y, g.m, "y")
    x0 = _vector(x0, g.n, "x0")
    aty = a.T @ y
    return float(-(a @ x0) @ y - 0.5 * (aty @ aty))


def primal_from_dual(g: Graph, y: Sequence[float], x0: Sequence[float]) -> np.ndarray:
    """x(y) = x0 + A^T y."""
    a = incidence_matrix(g).entries.astype(float)
    return _vector(x0, g.n, "x0") + a.T @ _vector(y, g.m, "y")


def optimal_dual(g: Graph, x0: Sequence[float]) -> np.ndarray:
    """A least-squares y* with x(y*) = mean(x0) * 1 (exists for connected graphs)."""
    a = incidence_matrix(g).entries.astype(float)
    x0 = _vector(x0, g.n, "x0")
    target = np.full(g.n, x0.mean()) - x0
    y, *_ = np.linalg.lstsq(a.T, target, rcond=None)
    return y


def initial_dual_gap(c: Sequence[float]) -> float:
    """D(y*) - D(0) = 1/2 ||c - mean(c)||^2."""
    values = [float(v) for v in c]
    if not values:
        raise InvalidParameterError("need at least one value")
    mean = math.fsum(values) / len(values)
    return 0.5 * math.fsum((v - mean) ** 2 for v in values)
