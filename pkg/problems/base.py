"""
Problem interface shared by the benchmark families.

A problem owns one local fitness function per node (agent). The engine only
needs the population-level call; the per-node call is the reference
definition and is used by tests and diagnostics.
"""

from abc import ABC, abstractmethod
from typing import Optional, Tuple

import numpy as np

from evolution.engine import Direction


class ProblemError(ValueError):
    """Invalid problem definition or genotype for a problem."""


class Problem(ABC):
    """Per-agent fitness evaluator with a direction and (optionally) a ground truth."""

    name: str = "problem"
    direction: Direction = Direction.MINIMIZE

    @property
    @abstractmethod
    def node_count(self) -> int:
        ...

    @property
    @abstractmethod
    def genome_length(self) -> int:
        ...

    @property
    @abstractmethod
    def bounds(self) -> Tuple[float, float]:
        ...

    @abstractmethod
    def evaluate(self, node: int, values: np.ndarray) -> float:
        """Local fitness of one node's genotype."""

    def evaluate_population(self, genomes: np.ndarray) -> np.ndarray:
        """Local fitness of every node; row n is node n's genotype."""
        return np.array([self.evaluate(n, genomes[n]) for n in range(genomes.shape[0])])

    def holdout_population(self, genomes: np.ndarray, nodes: np.ndarray) -> Optional[np.ndarray]:
        """Held-out score for the given nodes' genotypes, if the problem has one."""
        return None

    @property
    def grid_shape(self) -> Optional[Tuple[int, int]]:
        """(rows, cols) of the agent grid for grid problems, else None."""
        return None

    def phenotype_frame(self, genomes: np.ndarray, t: int) -> np.ndarray:
        """Grayscale frame of the agents' behavior at time index t."""
        raise ProblemError(f"{self.name} is not a grid problem; no phenotype frame")

    def truth_genomes(self) -> Optional[np.ndarray]:
        """Optimal genotype of every node (N x L) where one is defined."""
        return None

    def _check_node(self, node: int) -> int:
        if not 0 <= int(node) < self.node_count:
            raise ProblemError(f"Node {node} out of range for {self.node_count} agents")
        return int(node)

    def _check_length(self, values: np.ndarray) -> np.ndarray:
        values = np.asarray(values, dtype=np.float64).reshape(-1)
        if values.size != self.genome_length:
            raise ProblemError(
                f"{self.name}: genotype length {values.size}, expected {self.genome_length}"
            )
        return values
