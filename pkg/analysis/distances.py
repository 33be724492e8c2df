"""
Neighbor-distance maps of optimal behaviors.

For every agent: the mean absolute difference between its optimal genotype
and each neighbor's (averaged over genes), then averaged over neighbors.
High values mark places where neighbors need very different behaviors, so
copying from them is less useful.
"""

from typing import List, Sequence

import numpy as np

from network.topology import GridTopology, Topology, TopologyError


def neighbor_distance_map(truth: np.ndarray, topo: Topology) -> np.ndarray:
    """rows x cols map of mean |optimal genotype difference| to the Moore neighbors."""
    if not isinstance(topo, GridTopology):
        raise TopologyError("distance maps need a grid topology")
    truth = np.asarray(truth, dtype=np.float64)
    if truth.ndim != 2 or truth.shape[0] != topo.node_count:
        raise TopologyError(f"expected {topo.node_count} optimal genotypes, got shape {truth.shape}")

    matrix, degree = topo.padded_neighbors
    valid = matrix >= 0
    neighbors = truth[np.where(valid, matrix, 0)]
    per_neighbor = np.abs(truth[:, None, :] - neighbors).mean(axis=2)
    summed = np.where(valid, per_neighbor, 0.0).sum(axis=1)
    distances = np.divide(summed, degree, out=np.zeros_like(summed), where=degree > 0)
    return distances.reshape(topo.shape)


def joint_normalize(maps: Sequence[np.ndarray]) -> List[np.ndarray]:
    """Scale all maps by the largest value found in any of them."""
    peak = max((float(np.max(m)) for m in maps), default=0.0)
    if peak <= 0:
        return [np.array(m, dtype=np.float64) for m in maps]
    return [np.asarray(m, dtype=np.float64) / peak for m in maps]
