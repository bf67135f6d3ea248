"""
Edge-list text format.

    n <count>
    i j
    ...

Pairs are 0-indexed and written in canonical (sorted) order. The reader
rejects self-loops, duplicate edges and out-of-range vertices.
"""

import logging
from pathlib import Path
from typing import List, Tuple, Union

from private_gossip.topology.graph import Graph
from private_gossip.utils.errors import InvalidParameterError, OutputError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def format_edge_list(g: Graph) -> str:
    lines = [f"n {g.n}"]
    lines.extend(f"{i} {j}" for i, j in g.edges)
    return "\n".join(lines) + "\n"


def write_edge_list(g: Graph, path: PathLike) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(format_edge_list(g))
    except OSError as exc:
        raise OutputError(f"cannot write edge list: {exc.strerror}", str(path)) from exc
    logger.info("[GRAPH] wrote %s to %s", g.describe(), path)


def parse_edge_list(text: str) -> Graph:
    """Parse the edge-list format; the edge order in the text must already be canonical."""
    rows = [line.split() for line in text.splitlines() if line.strip()]
    if not rows or len(rows[0]) != 2 or rows[0][0] != "n":
        raise InvalidParameterError("edge list must start with 'n <count>'")
    try:
        n = int(rows[0][1])
    except ValueError as exc:
        raise InvalidParameterError(f"bad vertex count {rows[0][1]!r}") from exc

    edges: List[Tuple[int, int]] = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 2:
            raise InvalidParameterError(f"line {lineno}: expected 'i j', got {' '.join(row)!r}")
        try:
            edges.append((int(row[0]), int(row[1])))
        except ValueError as exc:
            raise InvalidParameterError(f"line {lineno}: non-integer vertex") from exc

    if any(i > j for i, j in edges) or edges != sorted(edges):
        raise InvalidParameterError("edge list is not in canonical order (i < j, sorted)")
    return Graph(n=n, edges=edges)


def read_edge_list(path: PathLike) -> Graph:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidParameterError(f"cannot read edge list {path}: {exc.strerror}") from exc
    return parse_edge_list(text)
