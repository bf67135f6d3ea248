"""
Spectral analysis of gossip topologies.

The incidence matrix A of a graph has one row per canonical edge (i, j) with
+1 in column i and -1 in column j, so A x = 0 holds exactly for consensus
vectors and L = A^T A is the combinatorial Laplacian. Eigenvalues of L are
computed with a dense cyclic Jacobi eigensolver.
"""

import logging
from functools import lru_cache
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from private_gossip.topology.graph import Graph, connected_components
from private_gossip.utils.errors import CapacityError, ConnectivityError

logger = logging.getLogger(__name__)

MAX_DENSE_VERTICES = 5000
CONNECTIVITY_TOLERANCE = 1e-9
JACOBI_TOLERANCE = 1e-12
MAX_SWEEPS = 100


class IncidenceMatrix(BaseModel):
    """Signed edge-vertex incidence matrix (m rows, n columns)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    entries: np.ndarray = Field(description="Dense int8 matrix with entries in {-1, 0, +1}")

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]


class SpectralReport(BaseModel):
    """Laplacian spectrum summary."""

    model_config = ConfigDict(frozen=True)

    algebraic_connectivity: float = Field(description="Second-smallest Laplacian eigenvalue")
    laplacian_eigenvalues: Tuple[float, ...] = Field(description="All Laplacian eigenvalues, ascending")
    sweeps: int = Field(description="Jacobi sweeps used", default=0)


def incidence_matrix(g: Graph) -> IncidenceMatrix:
    """Row e = (i, j) holds +1 at column i (the smaller endpoint) and -1 at column j."""
    entries = np.zeros((g.m, g.n), dtype=np.int8)
    for e, (i, j) in enumerate(g.edges):
        entries[e, i] = 1
        entries[e, j] = -1
    entries.setflags(write=False)
    return IncidenceMatrix(entries=entries)


def laplacian(g: Graph) -> np.ndarray:
    """Degree matrix minus adjacency matrix, built directly from the edge list."""
    lap = np.diag(np.asarray(g.degrees, dtype=np.int64))
    for i, j in g.edges:
        lap[i, j] -= 1
        lap[j, i] -= 1
    return lap


def jacobi_eigenvalues(
    matrix: np.ndarray,
    tol: float = JACOBI_TOLERANCE,
    max_sweeps: int = MAX_SWEEPS,
) -> Tuple[np.ndarray, int]:
    """
    Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.

    Sweeps over every (p, q) pair above the diagonal until the off-diagonal
    Frobenius norm drops to ``tol`` times the Frobenius norm of the input.

    Returns:
        (ascending eigenvalues, number of sweeps performed)

    Raises:
        CapacityError: no convergence within ``max_sweeps``
    """
    a = np.array(matrix, dtype=float, copy=True)
    n = a.shape[0]
    threshold = tol * np.linalg.norm(a)

    for sweep in range(max_sweeps + 1):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= threshold:
            return np.sort(np.diag(a)), sweep
        if sweep == max_sweeps:
            break

        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = np.copysign(1.0, theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c

                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0

    raise CapacityError(f"Jacobi eigensolver did not converge in {max_sweeps} sweeps (n={n})")


@lru_cache(maxsize=64)
def _spectrum(g: Graph) -> SpectralReport:
    values, sweeps = jacobi_eigenvalues(laplacian(g))
    if abs(values[0]) > CONNECTIVITY_TOLERANCE * g.n:
        logger.warning("[GRAPH] smallest Laplacian eigenvalue %.3e is not ~0", values[0])
    logger.debug("[GRAPH] Jacobi converged in %d sweeps for %s", sweeps, g.describe())
    return SpectralReport(
        algebraic_connectivity=float(values[1]),
        laplacian_eigenvalues=tuple(float(v) for v in values),
        sweeps=sweeps,
    )


def algebraic_connectivity(g: Graph) -> SpectralReport:
    """
    Laplacian spectrum of g and its algebraic connectivity alpha(G).

    Raises:
        CapacityError: n above the dense eigensolver guard
        ConnectivityError: alpha <= 1e-9 (graph disconnected)
    """
    if g.n > MAX_DENSE_VERTICES:
        raise CapacityError(f"dense eigensolve limited to n <= {MAX_DENSE_VERTICES}, got n={g.n}")
    report = _spectrum(g)
    if report.algebraic_connectivity <= CONNECTIVITY_TOLERANCE:
        components = connected_components(g)
        raise ConnectivityError(
            f"graph is disconnected ({components} components, alpha={report.algebraic_connectivity:.3e})",
            component_count=components,
        )
    return report

