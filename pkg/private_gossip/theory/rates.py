"""
Rate calculators for private gossip.

rho = 1 - alpha(G) / (2m) is the rate of the noiseless method. Node i's noise
decays in expectation at 1 - (d_i / m)(1 - phi_i^2); whenever that exceeds rho
for some node the asymptotic rate is driven by the noise instead.
"""

import logging
import math
from typing import List, Optional

from private_gossip.simulation.state import NoiseParams
from private_gossip.theory.schemas import RateReport
from private_gossip.topology.graph import Graph
from private_gossip.topology.spectral import algebraic_connectivity
from private_gossip.utils.errors import DegenerateInputError, InvalidParameterError

logger = logging.getLogger(__name__)

# Ties in the dominant set and the regime comparison are resolved within this margin.
RATE_TOLERANCE = 1e-12


def _check_params(g: Graph, p: NoiseParams) -> None:
    if p.n != g.n:
        raise InvalidParameterError(f"noise parameters cover {p.n} nodes, graph has {g.n}")


def noise_rate(degree: int, m: int, phi: float) -> float:
    """Expected per-iteration decay of one node's squared outstanding noise."""
    return 1.0 - (degree / m) * (1.0 - phi * phi)


def rho(g: Graph, alpha: Optional[float] = None) -> float:
    """1 - alpha(G) / (2m); raises ConnectivityError on a disconnected graph."""
    if alpha is None:
        alpha = algebraic_connectivity(g).algebraic_connectivity
    return 1.0 - alpha / (2 * g.m)


def noise_rates(g: Graph, p: NoiseParams) -> List[float]:
    _check_params(g, p)
    return [noise_rate(d, g.m, f) for d, f in zip(g.degrees, p.phi)]


def _weights(g: Graph, p: NoiseParams) -> List[float]:
    weights = [d * s2 for d, s2 in zip(g.degrees, p.sigma2)]
    if math.fsum(weights) == 0.0:
        raise DegenerateInputError("psi is undefined when every sigma2 is zero")
    return weights


def psi(t: int, g: Graph, p: NoiseParams) -> float:
    """Degree- and variance-weighted average of the t-th powers of the noise rates."""
    if t < 0:
        raise InvalidParameterError(f"iteration must be nonnegative, got {t}")
    weights = _weights(g, p)
    rates = noise_rates(g, p)
    return math.fsum(w * q ** t for w, q in zip(weights, rates)) / math.fsum(weights)


def dominant_set(g: Graph, p: NoiseParams) -> List[int]:
    """Indices maximising the noise rate."""
    rates = noise_rates(g, p)
    top = max(rates)
    return [i for i, q in enumerate(rates) if q >= top - RATE_TOLERANCE]


def dominant_psi(t: int, g: Graph, p: NoiseParams) -> float:
    """
    Large-t approximation of psi: only the dominant set contributes,
    (sum over M of d_i sigma2_i / sum of d_i sigma2_i) * max_rate ** t.
    """
    weights = _weights(g, p)
    members = dominant_set(g, p)
    share = math.fsum(weights[i] for i in members) / math.fsum(weights)
    return share * max(noise_rates(g, p)) ** t


def threshold_phi(g: Graph, alpha: Optional[float] = None) -> List[float]:
    """
    Largest decay rate per node that keeps the noise rate at or below rho:
    phi_i* = sqrt(1 - alpha / (2 d_i)).
    """
    if alpha is None:
        alpha = algebraic_connectivity(g).algebraic_connectivity
    return [math.sqrt(max(0.0, 1.0 - alpha / (2 * d))) for d in g.degrees]


def corollary_schedule(g: Graph, gamma: float) -> List[float]:
    """phi_i = sqrt(1 - gamma / d_i) for 0 < gamma <= d_min."""
    if not 0.0 < gamma <= g.min_degree:
        raise InvalidParameterError(f"gamma must lie in (0, d_min={g.min_degree}], got {gamma}")
    return [math.sqrt(1.0 - gamma / d) for d in g.degrees]


def rate_report(g: Graph, p: NoiseParams) -> RateReport:
    """All rate quantities for one graph and noise schedule."""
    _check_params(g, p)
    alpha = algebraic_connectivity(g).algebraic_connectivity
    base = rho(g, alpha)
    rates = noise_rates(g, p)
    top = max(rates)
    regime = "noise-driven" if top > base + RATE_TOLERANCE else "gossip-driven"
    logger.debug("[THEORY] rho=%.8f dominant noise rate=%.8f -> %s", base, top, regime)
    return RateReport(
        rho=base,
        alpha=alpha,
        m=g.m,
        degrees=list(g.degrees),
        noise_rates=rates,
        dominant_set=[i for i, q in enumerate(rates) if q >= top - RATE_TOLERANCE],
        dominant_rate=top,
        threshold_phis=threshold_phi(g, alpha),
        regime=regime,
    )
