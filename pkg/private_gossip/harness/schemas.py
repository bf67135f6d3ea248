"""
Experiment configuration and result schemas.

ExperimentConfig describes one Monte Carlo experiment: the topology, the
private values, the noise schedule and the sampling budget. Trace holds the
seed-aggregated curves that the CSV and SVG writers emit.
"""

import math
import re
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from private_gossip.simulation.randomness import Purpose, RandomStream
from private_gossip.simulation.state import NoiseParams
from private_gossip.theory.rates import corollary_schedule, threshold_phi
from private_gossip.topology.graph import Graph, default_radius
from private_gossip.utils.errors import ConfigError

GraphKind = Literal["cycle", "path", "complete", "rgg", "file"]
InitialRule = Literal["uniform", "ramp", "explicit"]

_COROLLARY = re.compile(r"^corollary:(?P<gamma>[0-9.eE+-]+)$")

# Seed-averaged relative errors below this are written as exact zeros.
RELATIVE_ERROR_FLOOR = 1e-30


class ExperimentConfig(BaseModel):
    """One experiment: topology, private values, noise schedule, sampling budget."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    graph: GraphKind = Field(description="Topology kind", default="cycle")
    n: int = Field(description="Vertex count", default=10, ge=2)
    radius: Union[float, Literal["auto"]] = Field(
        description="RGG connection radius; 'auto' uses sqrt(log n / n)",
        default="auto",
    )
    graph_seed: int = Field(description="Seed of the RGG point set (first attempt)", default=0, ge=0)
    edges_path: Optional[str] = Field(description="Edge-list file when graph = 'file'", default=None)

    initial: InitialRule = Field(description="How private values are generated", default="uniform")
    values: Optional[List[float]] = Field(description="Explicit private values", default=None)

    sigma2: Union[float, List[float]] = Field(description="Noise variance, scalar or per node", default=1.0)
    phi: Union[float, List[float], str] = Field(
        description="Decay rate: scalar, per node, 'threshold' or 'corollary:<gamma>'",
        default=0.5,
    )

    iterations: int = Field(description="Iterations k per run", default=10000, ge=1)
    seeds: int = Field(description="Number of independent runs R", default=100, ge=1)
    base_seed: int = Field(description="Seed of the first run; runs use base..base+R-1", default=0, ge=0)
    stride: int = Field(description="Record every stride-th iteration", default=1, ge=1)
    fit_window: float = Field(description="Trailing fraction of points used by rate fits", default=0.5, gt=0.0, le=1.0)

    out: Optional[str] = Field(description="CSV output path (or directory for sweeps)", default=None)
    svg: Optional[str] = Field(description="SVG output path", default=None)

    @field_validator("radius")
    @classmethod
    def _check_radius(cls, value: Union[float, str]) -> Union[float, str]:
        if value != "auto" and not 0.0 < float(value) <= math.sqrt(2.0):
            raise ValueError(f"radius must be 'auto' or lie in (0, sqrt(2)], got {value}")
        return value

    @field_validator("sigma2")
    @classmethod
    def _check_sigma2(cls, value: Union[float, List[float]]) -> Union[float, List[float]]:
        entries = value if isinstance(value, list) else [value]
        if any(not (s >= 0.0 and math.isfinite(s)) for s in entries):
            raise ValueError("sigma2 entries must be finite and nonnegative")
        return value

    @field_validator("phi")
    @classmethod
    def _check_phi(cls, value: Union[float, List[float], str]) -> Union[float, List[float], str]:
        if isinstance(value, str):
            if value == "threshold":
                return value
            try:
                value = float(value)
            except ValueError:
                value = value.strip()
        if isinstance(value, str):
            match = _COROLLARY.match(value)
            if match is None:
                raise ValueError(f"phi must be a number, a list, 'threshold' or 'corollary:<gamma>', got {value!r}")
            gamma = float(match.group("gamma"))
            if not gamma > 0.0:
                raise ValueError(f"corollary gamma must be positive, got {gamma}")
            return value
        entries = value if isinstance(value, list) else [value]
        if any(not 0.0 <= f < 1.0 for f in entries):
            raise ValueError("phi entries must satisfy 0 <= phi < 1")
        return value

    @model_validator(mode="after")
    def _check_consistency(self) -> "ExperimentConfig":
        if self.graph == "file" and not self.edges_path:
            raise ValueError("graph = 'file' needs edges_path")
        if self.graph == "cycle" and self.n < 3:
            raise ValueError("a cycle needs n >= 3")
        if self.initial == "explicit":
            if not self.values:
                raise ValueError("initial = 'explicit' needs values")
            if self.graph != "file" and len(self.values) != self.n:
                raise ValueError(f"expected {self.n} explicit values, got {len(self.values)}")
        for name in ("sigma2", "phi"):
            value = getattr(self, name)
            if isinstance(value, list) and self.graph != "file" and len(value) != self.n:
                raise ValueError(f"{name} has {len(value)} entries, expected {self.n}")
        return self

    def resolved_radius(self) -> float:
        return default_radius(self.n) if self.radius == "auto" else float(self.radius)

    def noise_params(self, g: Graph) -> NoiseParams:
        """Broadcast sigma2 and resolve the phi schedule against the actual graph."""
        sigma2 = self.sigma2 if isinstance(self.sigma2, list) else [self.sigma2] * g.n
        if self.phi == "threshold":
            phi = threshold_phi(g)
        elif isinstance(self.phi, str):
            phi = corollary_schedule(g, float(_COROLLARY.match(self.phi).group("gamma")))
        elif isinstance(self.phi, list):
            phi = self.phi
        else:
            phi = [self.phi] * g.n
        if len(sigma2) != g.n or len(phi) != g.n:
            raise ConfigError(f"per-node noise settings do not match the graph size n={g.n}")
        return NoiseParams(sigma2=tuple(sigma2), phi=tuple(phi))

    def initial_values(self, n: int, seed: int) -> List[float]:
        """Private values c for the run with the given seed."""
        if self.initial == "explicit":
            if len(self.values) != n:
                raise ConfigError(f"expected {n} explicit values, got {len(self.values)}")
            return list(self.values)
        if self.initial == "ramp":
            return [float(i + 1) for i in range(n)]
        stream = RandomStream(seed).substream(Purpose.INITIAL)
        return [stream.uniform01() for _ in range(n)]

    def label(self) -> str:
        if isinstance(self.phi, list):
            return "phi=per-node"
        return f"phi={self.phi}"


class FitResult(BaseModel):
    """Least-squares decay rate of a trace column."""

    rate: float = Field(description="Per-iteration decay rate in [0, 1]")
    degenerate: bool = Field(description="True when fewer than two positive points were available", default=False)
    points: int = Field(description="Points used by the fit", default=0)


class Trace(BaseModel):
    """Seed-aggregated curves of one experiment, one entry per recorded iteration."""

    t: List[int] = Field(description="Recorded iteration numbers")
    relative_error: List[float] = Field(description="Mean relative error over seeds")
    spread_min: List[float] = Field(description="Smallest per-seed relative error")
    spread_max: List[float] = Field(description="Largest per-seed relative error")
    drift_sq: List[float] = Field(description="Mean over seeds of mean_drift squared")
    bound: List[float] = Field(description="Bound overlay divided by the initial gap, mean over seeds")
    baseline: List[float] = Field(description="Mean relative error of standard gossip on the same edges")
    label: str = Field(description="Legend label", default="")
    meta: Dict[str, Any] = Field(description="Configuration and provenance", default_factory=dict)

    @model_validator(mode="after")
    def _check_columns(self) -> "Trace":
        size = len(self.t)
        for name in COLUMNS[1:]:
            if len(getattr(self, name)) != size:
                raise ValueError(f"column {name} has {len(getattr(self, name))} entries, expected {size}")
        return self


COLUMNS = ["t", "relative_error", "spread_min", "spread_max", "drift_sq", "bound", "baseline"]
