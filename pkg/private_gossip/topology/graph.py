"""
Undirected simple graphs and the topology generators used by the experiments.

A Graph is immutable: edges are stored as sorted (i, j) pairs with i < j and
the edge list is sorted lexicographically, which fixes the edge indexing used
by the incidence matrix and by the gossip edge sampler.
"""

import logging
import math
from typing import Any, Dict, List, Tuple

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from private_gossip.simulation.randomness import Purpose, RandomStream
from private_gossip.utils.errors import ConnectivityError, InvalidParameterError

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


class Graph(BaseModel):
    """Undirected simple graph on vertices 0..n-1."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(description="Vertex count")
    edges: Tuple[Edge, ...] = Field(
        description="Canonical edge list: (i, j) with i < j, sorted lexicographically",
        default=(),
    )
    degrees: Tuple[int, ...] = Field(
        description="Per-vertex edge counts (derived from edges)",
        default=(),
    )

    @model_validator(mode="before")
    @classmethod
    def _canonicalize(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        n = data.get("n")
        if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 2:
            raise InvalidParameterError(f"graph needs at least 2 vertices, got n={n}")
        n = int(n)

        seen = set()
        for pair in data.get("edges", ()):
            i, j = (int(v) for v in pair)
            if i == j:
                raise InvalidParameterError(f"self-loop at vertex {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise InvalidParameterError(f"edge ({i}, {j}) has an endpoint outside 0..{n - 1}")
            edge = (min(i, j), max(i, j))
            if edge in seen:
                raise InvalidParameterError(f"duplicate edge {edge}")
            seen.add(edge)

        edges = tuple(sorted(seen))
        degrees = [0] * n
        for i, j in edges:
            degrees[i] += 1
            degrees[j] += 1

        given = data.get("degrees")
        if given and tuple(int(d) for d in given) != tuple(degrees):
            raise InvalidParameterError("degrees do not match the edge list")
        return {"n": n, "edges": edges, "degrees": tuple(degrees)}

    @property
    def m(self) -> int:
        """Edge count."""
        return len(self.edges)

    @property
    def min_degree(self) -> int:
        return min(self.degrees)

    @property
    def max_degree(self) -> int:
        return max(self.degrees)

    def neighbors(self, i: int) -> List[int]:
        """Sorted neighbour list of vertex i."""
        return sorted([b if a == i else a for a, b in self.edges if i in (a, b)])

    def describe(self) -> str:
        return f"Graph(n={self.n}, m={self.m}, degrees {self.min_degree}..{self.max_degree})"


def connected_components(g: Graph) -> int:
    """Number of connected components."""
    nxg = nx.Graph()
    nxg.add_nodes_from(range(g.n))
    nxg.add_edges_from(g.edges)
    return nx.number_connected_components(nxg)


def build_cycle(n: int) -> Graph:
    """Ring on n >= 3 vertices: edges (i, i+1 mod n)."""
    if n < 3:
        raise InvalidParameterError(f"a cycle needs n >= 3, got {n}")
    return Graph(n=n, edges=[(i, (i + 1) % n) for i in range(n)])


def build_path(n: int) -> Graph:
    if n < 2:
        raise InvalidParameterError(f"a path needs n >= 2, got {n}")
    return Graph(n=n, edges=[(i, i + 1) for i in range(n - 1)])


def build_complete(n: int) -> Graph:
    if n < 2:
        raise InvalidParameterError(f"a complete graph needs n >= 2, got {n}")
    return Graph(n=n, edges=[(i, j) for i in range(n) for j in range(i + 1, n)])


def default_radius(n: int) -> float:
    """Connectivity radius sqrt(log(n) / n) for random geometric graphs."""
    if n < 2:
        raise InvalidParameterError(f"radius rule needs n >= 2, got {n}")
    return math.sqrt(math.log(n) / n)


def build_random_geometric(n: int, r: float, seed: int) -> Graph:
    """
    Random geometric graph in the unit square.

    Draws n points uniformly from the GEOMETRY sub-stream of ``seed`` and joins
    every pair at Euclidean distance <= r.

    Raises:
        InvalidParameterError: n < 2 or r outside (0, sqrt(2)]
        ConnectivityError: the sampled graph is disconnected
    """
    if n < 2:
        raise InvalidParameterError(f"a random geometric graph needs n >= 2, got {n}")
    if not 0.0 < r <= math.sqrt(2.0):
        raise InvalidParameterError(f"radius must lie in (0, sqrt(2)], got {r}")

    stream = RandomStream(seed).substream(Purpose.GEOMETRY)
    points = stream.uniform_array(2 * n).reshape(n, 2)
    deltas = points[:, None, :] - points[None, :, :]
    distances = np.sqrt((deltas ** 2).sum(axis=-1))
    rows, cols = np.nonzero(np.triu(distances <= r, k=1))
    g = Graph(n=n, edges=list(zip(rows.tolist(), cols.tolist())))

    components = connected_components(g)
    if components > 1:
        logger.debug("[GRAPH] rgg n=%d r=%.6f seed=%d has %d components", n, r, seed, components)
        raise ConnectivityError(
            f"random geometric graph (n={n}, r={r:.6g}, seed={seed}) has {components} components",
            component_count=components,
        )
    return g


GENERATORS: Dict[str, Any] = {
    "cycle": build_cycle,
    "path": build_path,
    "complete": build_complete,
}
