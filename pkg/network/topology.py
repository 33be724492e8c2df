"""
Agent network topologies.

Two shapes are supported:
- GridTopology: m x n cells, Moore neighborhood, border cells only see the
  neighbors that exist.
- GraphTopology: explicit undirected edge list, 1-hop neighborhood.

Node ids are plain integers; grid cells flatten row-major (i * cols + j).
Topologies are immutable after construction and safe to share across threads.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import FrozenSet, Iterable, List, Sequence, Tuple, Union

import numpy as np
from loguru import logger


NodeId = int
Edge = Tuple[int, int]


class TopologyError(ValueError):
    """Base error for invalid topologies."""


class InvalidNodeError(TopologyError, IndexError):
    """Raised when a node id is outside the topology."""

    def __init__(self, node, node_count: int):
        self.node = node
        self.node_count = node_count
        super().__init__(f"Node {node!r} out of range for topology with {node_count} nodes")


class TopologyParseError(TopologyError):
    """Raised when a topology file line cannot be accepted."""

    def __init__(self, line_no: int, line: str, reason: str):
        self.line_no = line_no
        self.line = line
        super().__init__(f"line {line_no}: {reason}: {line!r}")


class Topology(ABC):
    """Common neighborhood interface for grids and graphs."""

    @property
    @abstractmethod
    def node_count(self) -> int:
        ...

    @abstractmethod
    def neighbors(self, n: NodeId) -> List[NodeId]:
        ...

    def _check(self, n) -> int:
        if isinstance(n, (bool, np.bool_)) or not isinstance(n, (int, np.integer)):
            raise InvalidNodeError(n, self.node_count)
        if not 0 <= n < self.node_count:
            raise InvalidNodeError(n, self.node_count)
        return int(n)

    @cached_property
    def neighbor_table(self) -> Tuple[Tuple[NodeId, ...], ...]:
        """Neighbor tuples for every node, in node order."""
        return tuple(tuple(self.neighbors(n)) for n in range(self.node_count))

    @cached_property
    def padded_neighbors(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        Neighbor matrix padded with -1 and the degree of each node.

        Rows keep the ascending order of `neighbors`, which the engine relies
        on for its lowest-id tie rule.
        """
        table = self.neighbor_table
        degree = np.array([len(row) for row in table], dtype=np.int64)
        width = int(degree.max()) if len(degree) else 0
        matrix = np.full((self.node_count, max(width, 1)), -1, dtype=np.int64)
        for n, row in enumerate(table):
            matrix[n, :len(row)] = row
        matrix.setflags(write=False)
        degree.setflags(write=False)
        return matrix, degree

    def is_connected(self) -> bool:
        """Breadth-first reachability from node 0."""
        if self.node_count == 0:
            return True
        seen = {0}
        frontier = [0]
        table = self.neighbor_table
        while frontier:
            nxt = []
            for n in frontier:
                for m in table[n]:
                    if m not in seen:
                        seen.add(m)
                        nxt.append(m)
            frontier = nxt
        return len(seen) == self.node_count


@dataclass(frozen=True)
class GridTopology(Topology):
    """An m x n grid of agents with the Moore neighborhood."""
    rows: int
    cols: int

    def __post_init__(self):
        if int(self.rows) < 1 or int(self.cols) < 1:
            raise TopologyError(f"Grid dimensions must be positive, got {self.rows}x{self.cols}")

    @property
    def node_count(self) -> int:
        return self.rows * self.cols

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def node_id(self, i: int, j: int) -> NodeId:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise InvalidNodeError((i, j), self.node_count)
        return i * self.cols + j

    def coords(self, n: NodeId) -> Tuple[int, int]:
        n = self._check(n)
        return divmod(n, self.cols)

    def neighbors(self, n: NodeId) -> List[NodeId]:
        return moore_neighbors(self, n)


@dataclass(frozen=True)
class GraphTopology(Topology):
    """An irregular network given by an undirected edge list."""
    count: int
    edges: FrozenSet[Edge] = field(default_factory=frozenset)

    def __post_init__(self):
        if int(self.count) < 1:
            raise TopologyError(f"Graph must have at least one node, got {self.count}")
        normalized = set()
        for a, b in self.edges:
            a, b = int(a), int(b)
            if a == b:
                raise TopologyError(f"Self-loop on node {a}")
            if not (0 <= a < self.count and 0 <= b < self.count):
                raise TopologyError(f"Edge ({a}, {b}) references a node >= {self.count}")
            normalized.add((min(a, b), max(a, b)))
        object.__setattr__(self, "edges", frozenset(normalized))

    @property
    def node_count(self) -> int:
        return self.count

    @cached_property
    def _adjacency(self) -> Tuple[Tuple[NodeId, ...], ...]:
        adjacency: List[List[int]] = [[] for _ in range(self.count)]
        for a, b in self.edges:
            adjacency[a].append(b)
            adjacency[b].append(a)
        return tuple(tuple(sorted(row)) for row in adjacency)

    def neighbors(self, n: NodeId) -> List[NodeId]:
        return graph_neighbors(self, n)

    @classmethod
    def from_edges(cls, count: int, edges: Iterable[Sequence[int]]) -> "GraphTopology":
        """Build a graph, rejecting duplicate edges (in either orientation)."""
        seen = set()
        for a, b in edges:
            key = (min(a, b), max(a, b))
            if key in seen:
                raise TopologyError(f"Duplicate edge ({a}, {b})")
            seen.add(key)
        return cls(count, frozenset(seen))


def moore_neighbors(g: GridTopology, n: NodeId) -> List[NodeId]:
    """
    Existing horizontal, vertical and diagonal neighbors of a grid cell.

    Returns ids in row-major order; border cells only get in-bounds cells.
    """
    i, j = g.coords(n)
    result = []
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            ni, nj = i + di, j + dj
            if 0 <= ni < g.rows and 0 <= nj < g.cols:
                result.append(ni * g.cols + nj)
    return result


def graph_neighbors(g: GraphTopology, n: NodeId) -> List[NodeId]:
    """Nodes sharing an edge with n, ascending."""
    n = g._check(n)
    return list(g._adjacency[n])


def _is_index(token: str) -> bool:
    # str.isdigit() alone accepts superscripts that int() rejects
    return token.isascii() and token.isdigit()


def load_topology(source: Union[str, Path]) -> GraphTopology:
    """
    Parse a graph description.

    Format: first non-comment line is the node count, each further line is an
    edge "a b". Lines starting with '#' and blank lines are ignored.

    Args:
        source: a Path to a UTF-8 file, or the description text itself

    Raises:
        TopologyParseError: malformed line, self-loop, duplicate edge or
            out-of-range endpoint (with the 1-based line number)
    """
    if isinstance(source, Path):
        text = source.read_text(encoding='utf-8')
        origin = str(source)
    else:
        text = source
        origin = "<text>"

    count = None
    seen = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        parts = line.split()
        if count is None:
            if len(parts) != 1 or not _is_index(parts[0]) or int(parts[0]) < 1:
                raise TopologyParseError(line_no, raw, "expected a positive node count")
            count = int(parts[0])
            continue
        if len(parts) != 2 or not all(_is_index(p) for p in parts):
            raise TopologyParseError(line_no, raw, "expected an edge 'a b'")
        a, b = int(parts[0]), int(parts[1])
        if a == b:
            raise TopologyParseError(line_no, raw, "self-loop")
        if a >= count or b >= count:
            raise TopologyParseError(line_no, raw, f"endpoint >= node count {count}")
        key = (min(a, b), max(a, b))
        if key in seen:
            raise TopologyParseError(line_no, raw, "duplicate edge")
        seen.add(key)

    if count is None:
        raise TopologyError(f"{origin}: missing node count")

    graph = GraphTopology(count, frozenset(seen))
    if not graph.is_connected():
        logger.warning(f"Topology {origin} is not connected; isolated agents will hill-climb")
    return graph
