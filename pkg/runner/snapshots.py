"""Phenotype frames of a running network."""

from typing import Sequence, Union

import numpy as np

from evolution.engine import AgentState, Population
from problems.base import Problem, ProblemError


def _genomes(agents) -> np.ndarray:
    if isinstance(agents, Population):
        return agents.genomes
    if isinstance(agents, np.ndarray):
        return agents
    return np.stack([a.genotype.values for a in agents])


def snapshot_phenotype(
    agents: Union[Population, Sequence[AgentState], np.ndarray],
    problem: Problem,
    t: int,
) -> np.ndarray:
    """
    Grayscale frame of the network's behavior at time index t.

    Imitation frames have image resolution (a tiled agent paints its block),
    vector illumination shows gene t, single-parameter illumination shows the
    agents' sine output at hour t.
    """
    if problem.grid_shape is None:
        raise ProblemError(f"{problem.name} has no grid layout to render")
    genomes = _genomes(agents)
    if genomes.shape != (problem.node_count, problem.genome_length):
        raise ProblemError(
            f"expected {problem.node_count} x {problem.genome_length} genomes, got {genomes.shape}"
        )
    return problem.phenotype_frame(genomes, int(t))
