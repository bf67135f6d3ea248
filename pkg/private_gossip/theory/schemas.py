"""
Result types of the rate calculators.
"""

from typing import List, Literal

from pydantic import BaseModel, ConfigDict, Field

Regime = Literal["gossip-driven", "noise-driven"]


class RateReport(BaseModel):
    """Convergence rates of private gossip on one graph with one noise schedule."""

    model_config = ConfigDict(frozen=True)

    rho: float = Field(description="Gossip rate 1 - alpha / (2m)")
    alpha: float = Field(description="Algebraic connectivity of the graph")
    m: int = Field(description="Edge count")
    degrees: List[int] = Field(description="Per-node degree", default_factory=list)
    noise_rates: List[float] = Field(description="Per-node 1 - (d_i / m)(1 - phi_i^2)")
    dominant_set: List[int] = Field(description="Nodes attaining the largest noise rate")
    dominant_rate: float = Field(description="Largest per-node noise rate")
    threshold_phis: List[float] = Field(description="Per-node sqrt(1 - alpha / (2 d_i))")
    regime: Regime = Field(description="Which rate governs the asymptotic decay")

    @property
    def asymptotic_rate(self) -> float:
        return max(self.rho, self.dominant_rate)


class BoundCurve(BaseModel):
    """Right-hand side of an expected dual-gap bound for horizons 1..k."""

    model_config = ConfigDict(frozen=True)

    values: List[float] = Field(description="Bound at horizon j (index j - 1)")
    gap0: float = Field(description="Initial dual gap D(y*) - D(y0)")
    noise_scale: float = Field(description="sum(d_i sigma2_i) / (4m)")
    base_rate: float = Field(description="Geometric rate multiplying the initial gap")
