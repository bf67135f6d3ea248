"""
Experiment workflow state.

Carried between the nodes of the compiled experiment graph. Each node
returns only the keys it changes.
"""

from typing import List, Optional, TypedDict

from private_gossip.harness.schemas import ExperimentConfig, Trace
from private_gossip.simulation.state import NoiseParams
from private_gossip.theory.schemas import RateReport
from private_gossip.topology.graph import Graph


class SeedResult(TypedDict):
    """Recorded curves of one seed (private run and its paired baseline)."""

    seed: int
    t: List[int]
    relative_error: List[float]
    drift_sq: List[float]
    baseline: List[float]
    gap0: float


class ExperimentState(TypedDict, total=False):
    experiment: ExperimentConfig

    # Topology resolution (RGG attempts advance graph_seed until connected)
    graph_seed: int
    attempts: int
    graph: Optional[Graph]
    last_error: Optional[str]

    # Noise schedule and theory
    params: NoiseParams
    report: RateReport

    # Monte Carlo results
    seed_results: List[SeedResult]
    trace: Trace
