"""
State of a private gossip simulation.

NoiseParams carries the per-node privacy knobs (initial variance and decay
rate). SimState is the mutable state machine driven by the engine; it stores
per-node values, counters and outstanding noise as parallel lists and hands
out NodeState snapshots on request.
"""

import math
from dataclasses import dataclass, field
from typing import List, NamedTuple, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from private_gossip.topology.graph import Graph
from private_gossip.utils.errors import InvalidParameterError


class NoiseParams(BaseModel):
    """Per-node noise schedule: v ~ N(0, sigma2[i]) scaled by phi[i] ** t_i."""

    model_config = ConfigDict(frozen=True)

    sigma2: Tuple[float, ...] = Field(description="Initial noise variance per node (>= 0)")
    phi: Tuple[float, ...] = Field(description="Noise decay rate per node, 0 <= phi < 1")

    @field_validator("sigma2")
    @classmethod
    def _check_sigma2(cls, values: Tuple[float, ...]) -> Tuple[float, ...]:
        for i, s in enumerate(values):
            if not (s >= 0.0 and math.isfinite(s)):
                raise InvalidParameterError(f"sigma2[{i}] must be finite and nonnegative, got {s}")
        return values

    @field_validator("phi")
    @classmethod
    def _check_phi(cls, values: Tuple[float, ...]) -> Tuple[float, ...]:
        for i, f in enumerate(values):
            if not 0.0 <= f < 1.0:
                raise InvalidParameterError(f"phi[{i}] must satisfy 0 <= phi < 1, got {f}")
        return values

    @model_validator(mode="after")
    def _check_lengths(self) -> "NoiseParams":
        if len(self.sigma2) != len(self.phi):
            raise InvalidParameterError(
                f"sigma2 has {len(self.sigma2)} entries but phi has {len(self.phi)}"
            )
        return self

    @classmethod
    def uniform(cls, n: int, sigma2: float, phi: float) -> "NoiseParams":
        """Same sigma2 and phi at every node."""
        return cls(sigma2=(float(sigma2),) * n, phi=(float(phi),) * n)

    @classmethod
    def silent(cls, n: int) -> "NoiseParams":
        """No noise at all (standard pairwise gossip)."""
        return cls.uniform(n, 0.0, 0.0)

    @property
    def n(self) -> int:
        return len(self.sigma2)

    @property
    def is_silent(self) -> bool:
        return all(s == 0.0 for s in self.sigma2)


class NodeState(NamedTuple):
    """Snapshot of one node: value, noise counter and the noise still to be withdrawn."""

    x: float
    t: int
    outstanding: float


class StepRecord(NamedTuple):
    """Metrics handed to a run probe."""

    t: int
    relative_error: float
    mean_drift: float
    outstanding_sum: float


@dataclass
class SimState:
    """
    Mutable simulation state, owned by a single caller.

    ``outstanding[i]`` is phi_i ** (t_i - 1) * v_i of the last draw of node i,
    and is 0 while t_i == 0.
    """

    graph: Graph
    params: NoiseParams
    c: Tuple[float, ...]
    mean: float
    x: List[float]
    t: List[int]
    outstanding: List[float]
    iteration: int = 0
    injected: float = 0.0
    initial_error: float = field(default=0.0, repr=False)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def target(self) -> Tuple[float, ...]:
        """x* = mean(c) at every node."""
        return (self.mean,) * self.graph.n

    @property
    def nodes(self) -> List[NodeState]:
        return [NodeState(x, t, o) for x, t, o in zip(self.x, self.t, self.outstanding)]

    def node(self, i: int) -> NodeState:
        return NodeState(self.x[i], self.t[i], self.outstanding[i])

    def set_node(self, i: int, node: NodeState) -> None:
        self.x[i] = node.x
        self.t[i] = node.t
        self.outstanding[i] = node.outstanding

    def copy(self) -> "SimState":
        return SimState(
            graph=self.graph,
            params=self.params,
            c=self.c,
            mean=self.mean,
            x=list(self.x),
            t=list(self.t),
            outstanding=list(self.outstanding),
            iteration=self.iteration,
            injected=self.injected,
            initial_error=self.initial_error,
        )


def squared_distance(values: Sequence[float], center: float) -> float:
    return math.fsum((v - center) ** 2 for v in values)
