"""Agent network topologies."""

from network.topology import (
    GraphTopology,
    GridTopology,
    InvalidNodeError,
    NodeId,
    Topology,
    TopologyError,
    TopologyParseError,
    graph_neighbors,
    load_topology,
    moore_neighbors,
)

__all__ = [
    "GraphTopology",
    "GridTopology",
    "InvalidNodeError",
    "NodeId",
    "Topology",
    "TopologyError",
    "TopologyParseError",
    "graph_neighbors",
    "load_topology",
    "moore_neighbors",
]
