"""
Private pairwise gossip with controlled noise insertion.

Each iteration samples one edge (i, j) uniformly. Both endpoints draw fresh
noise v ~ N(0, sigma2), inject phi ** t * v while withdrawing the noise they
injected last time, and then replace their values by the noised average.
Because every injection is withdrawn at the node's next activation, the
network sum differs from sum(c) exactly by the outstanding (not yet
withdrawn) noise, and that difference decays to zero.

With every sigma2 equal to 0 the update reduces to standard pairwise gossip.
"""

import logging
import math
from typing import Callable, Optional, Sequence, Tuple

from private_gossip.simulation.randomness import Purpose, RandomStream, gaussian, uniform_edge_index
from private_gossip.simulation.state import (
    NodeState,
    NoiseParams,
    SimState,
    StepRecord,
    squared_distance,
)
from private_gossip.topology.graph import Graph
from private_gossip.utils.errors import DegenerateInputError, InvalidParameterError

logger = logging.getLogger(__name__)

Probe = Callable[[StepRecord], None]


def init(g: Graph, c: Sequence[float], p: NoiseParams) -> SimState:
    """Start the protocol at x = c with all counters and outstanding noise at zero."""
    values = tuple(float(v) for v in c)
    if len(values) != g.n:
        raise InvalidParameterError(f"expected {g.n} private values, got {len(values)}")
    if p.n != g.n:
        raise InvalidParameterError(f"noise parameters cover {p.n} nodes, graph has {g.n}")
    if not all(math.isfinite(v) for v in values):
        raise InvalidParameterError("private values must be finite")

    mean = math.fsum(values) / g.n
    return SimState(
        graph=g,
        params=p,
        c=values,
        mean=mean,
        x=list(values),
        t=[0] * g.n,
        outstanding=[0.0] * g.n,
        initial_error=squared_distance(values, mean),
    )


def draw_noise(state: SimState, i: int, s: RandomStream) -> Tuple[float, NodeState]:
    """
    Noise node i injects at its current activation.

    Returns ``(w, node)`` where w = phi ** t * v - outstanding and ``node`` is
    the updated NodeState (counter incremented, outstanding = phi ** t * v,
    value unchanged). The state itself is not modified.
    """
    if not 0 <= i < state.n:
        raise InvalidParameterError(f"node {i} outside 0..{state.n - 1}")
    t_i = state.t[i]
    sigma2 = state.params.sigma2[i]
    if sigma2 == 0.0:
        return 0.0, NodeState(state.x[i], t_i + 1, state.outstanding[i])

    v = gaussian(s.substream(Purpose.NOISE, i), sigma2)
    fresh = state.params.phi[i] ** t_i * v
    return fresh - state.outstanding[i], NodeState(state.x[i], t_i + 1, fresh)


def step(state: SimState, s: RandomStream) -> SimState:
    """Process one uniformly sampled edge; mutates and returns ``state``."""
    g = state.graph
    i, j = g.edges[uniform_edge_index(s.substream(Purpose.EDGES), g.m)]
    w_i, node_i = draw_noise(state, i, s)
    w_j, node_j = draw_noise(state, j, s)

    average = (state.x[i] + w_i + state.x[j] + w_j) / 2
    state.set_node(i, node_i._replace(x=average))
    state.set_node(j, node_j._replace(x=average))
    state.injected += w_i + w_j
    state.iteration += 1
    return state


def record(state: SimState) -> StepRecord:
    return StepRecord(
        t=state.iteration,
        relative_error=relative_error(state),
        mean_drift=mean_drift(state),
        outstanding_sum=math.fsum(state.outstanding),
    )


def run(
    state: SimState,
    k: int,
    s: RandomStream,
    probe: Optional[Probe] = None,
    stride: int = 1,
) -> SimState:
    """
    Run k iterations.

    The probe, if given, receives a StepRecord before the first step, after
    every ``stride``-th iteration and after the last one.
    """
    if k < 0:
        raise InvalidParameterError(f"iteration count must be nonnegative, got {k}")
    if stride < 1:
        raise InvalidParameterError(f"record stride must be at least 1, got {stride}")

    if probe is not None:
        probe(record(state))
    for done in range(1, k + 1):
        step(state, s)
        if probe is not None and (done % stride == 0 or done == k):
            probe(record(state))
    logger.debug(
        "[ENGINE] %d iterations done, t = %d, outstanding noise %.3e",
        k, state.iteration, math.fsum(state.outstanding),
    )
    return state


def relative_error(state: SimState) -> float:
    """||x - x*||^2 / ||x0 - x*||^2."""
    if state.initial_error == 0.0:
        raise DegenerateInputError("relative error undefined: the private values are already at consensus")
    return squared_distance(state.x, state.mean) / state.initial_error


def mean_drift(state: SimState) -> float:
    """Average of the current values minus the true average of c."""
    return math.fsum(state.x) / state.n - state.mean


def sum_defect(state: SimState) -> float:
    """sum(x) - sum(c) - sum(outstanding); zero up to rounding at every iteration."""
    return math.fsum(state.x) - math.fsum(state.c) - math.fsum(state.outstanding)


def drift_variance(state: SimState) -> float:
    """
    Variance of mean_drift given the current counters:
    (1/n^2) * sum over t_i >= 1 of sigma2_i * phi_i ** (2 (t_i - 1)).
    """
    total = math.fsum(
        s2 * f ** (2 * (t - 1))
        for s2, f, t in zip(state.params.sigma2, state.params.phi, state.t)
        if t >= 1
    )
    return total / state.n ** 2
