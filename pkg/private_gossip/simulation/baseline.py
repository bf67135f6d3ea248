"""
Standard pairwise gossip (the noiseless baseline).

Two independent implementations are kept: the classic pairwise averaging
loop, and randomized Kaczmarz on the incidence system A x = 0, which projects
x onto the hyperplane of the sampled row and lands on the same iterate.
"""

import math
from typing import Callable, Iterable, List, Optional, Sequence

import numpy as np

from private_gossip.simulation.randomness import Purpose, RandomStream, uniform_edge_index
from private_gossip.simulation.state import StepRecord, squared_distance
from private_gossip.topology.graph import Graph
from private_gossip.topology.spectral import incidence_matrix
from private_gossip.utils.errors import DegenerateInputError, InvalidParameterError


def _check_values(g: Graph, c: Sequence[float]) -> List[float]:
    values = [float(v) for v in c]
    if len(values) != g.n:
        raise InvalidParameterError(f"expected {g.n} private values, got {len(values)}")
    return values


def standard_gossip(
    g: Graph,
    c: Sequence[float],
    edge_sequence: Iterable[int],
    probe: Optional[Callable[[int, List[float]], None]] = None,
) -> List[float]:
    """
    Pairwise gossip along a given sequence of edge indices.

    ``probe(t, x)`` is called after every step with the live value list.
    """
    x = _check_values(g, c)
    edges = g.edges
    for t, e in enumerate(edge_sequence, start=1):
        i, j = edges[e]
        x[i] = x[j] = (x[i] + x[j]) / 2
        if probe is not None:
            probe(t, x)
    return x


def kaczmarz_gossip(g: Graph, c: Sequence[float], edge_sequence: Iterable[int]) -> np.ndarray:
    """Randomized Kaczmarz on A x = 0: x <- x - (a_e . x / ||a_e||^2) a_e."""
    a = incidence_matrix(g).entries.astype(float)
    x = np.asarray(_check_values(g, c), dtype=float)
    for e in edge_sequence:
        row = a[e]
        x = x - (row @ x) / (row @ row) * row
    return x


def baseline_run(
    g: Graph,
    c: Sequence[float],
    k: int,
    s: RandomStream,
    probe: Optional[Callable[[StepRecord], None]] = None,
    stride: int = 1,
) -> List[float]:
    """
    Standard gossip for k iterations, drawing edges from the EDGES sub-stream
    of ``s`` exactly as the private engine does, and reporting StepRecords
    on the same schedule as ``engine.run``.
    """
    if k < 0:
        raise InvalidParameterError(f"iteration count must be nonnegative, got {k}")
    x0 = _check_values(g, c)
    mean = math.fsum(x0) / g.n
    initial_error = squared_distance(x0, mean)
    if probe is not None and initial_error == 0.0:
        raise DegenerateInputError("relative error undefined: the private values are already at consensus")

    def report(t: int, x: List[float]) -> None:
        if probe is not None and (t == 0 or t % stride == 0 or t == k):
            probe(StepRecord(
                t=t,
                relative_error=squared_distance(x, mean) / initial_error,
                mean_drift=math.fsum(x) / g.n - mean,
                outstanding_sum=0.0,
            ))

    edges = s.substream(Purpose.EDGES)
    report(0, x0)
    return standard_gossip(g, x0, (uniform_edge_index(edges, g.m) for _ in range(k)), report)
