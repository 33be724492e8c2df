"""
Embodied Evolution engine.

Every agent runs a population-less evolutionary loop: pick a partner from its
neighborhood (none, best or random), build an offspring by copy or crossover
(gated by cp), apply Gaussian mutation, evaluate, and keep the offspring only
if it is strictly better than the current genotype.

Generations are synchronous: all agents read generation-g states and the
generation-(g+1) states are committed together, so results do not depend on
agent order or on how the work is scheduled.

Random draws per agent per generation are fixed regardless of the variant:
one block of 2 + L uniforms (partner, cp gate, L crossover-mask values) and
then L standard normals. Variants that do not need a draw still consume it,
which keeps XoverRand(cp=0) identical to HillClimbing and
XoverRand(cp=1, cr=0) identical to CopyRand under the same seeds.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, List, Optional, Sequence

import numpy as np

from evolution.genome import (
    Genotype,
    GenomeError,
    OperatorParams,
    crossover_mask,
    mix_arithmetic,
    mix_uniform,
    mutate_clamped,
)
from evolution.rng import INIT_STREAM, AgentRng
from network.topology import NodeId, Topology

if TYPE_CHECKING:
    from problems.base import Problem


class EmptyNeighborhoodError(LookupError):
    """Raised when partner selection is asked for a node without neighbors."""

    def __init__(self, node: int):
        self.node = node
        super().__init__(f"Node {node} has no neighbors")


class Direction(str, Enum):
    """Optimization direction of a problem."""
    MINIMIZE = "minimize"
    MAXIMIZE = "maximize"

    def better(self, candidate, incumbent):
        """Strict improvement test; works elementwise on arrays."""
        if self is Direction.MINIMIZE:
            return candidate < incumbent
        return candidate > incumbent


class PartnerSelection(str, Enum):
    NONE = "none"
    BEST = "best"
    RANDOM = "random"


class Recombination(str, Enum):
    SELF = "self"
    COPY = "copy"
    CROSSOVER = "crossover"


class CrossoverMode(str, Enum):
    """Uniform crossover, arithmetic crossover, or pick by genotype length."""
    AUTO = "auto"
    UNIFORM = "uniform"
    ARITHMETIC = "arithmetic"

    def resolve(self, genome_length: int) -> CrossoverMode:
        if self is CrossoverMode.AUTO:
            return CrossoverMode.ARITHMETIC if genome_length == 1 else CrossoverMode.UNIFORM
        if self is CrossoverMode.ARITHMETIC and genome_length != 1:
            raise GenomeError(f"Arithmetic crossover needs single-parameter genotypes, got length {genome_length}")
        return self


class Variant(str, Enum):
    """The five versions of the algorithm."""
    HILL_CLIMBING = "HillClimbing"
    COPY_BEST = "CopyBest"
    COPY_RAND = "CopyRand"
    XOVER_BEST = "XoverBest"
    XOVER_RAND = "XoverRand"

    @property
    def partner_selection(self) -> PartnerSelection:
        return _VARIANT_TABLE[self][0]

    @property
    def recombination(self) -> Recombination:
        return _VARIANT_TABLE[self][1]

    @property
    def uses_cp(self) -> bool:
        return self.recombination is not Recombination.SELF

    @property
    def uses_cr(self) -> bool:
        return self.recombination is Recombination.CROSSOVER


_VARIANT_TABLE = {
    Variant.HILL_CLIMBING: (PartnerSelection.NONE, Recombination.SELF),
    Variant.COPY_BEST: (PartnerSelection.BEST, Recombination.COPY),
    Variant.COPY_RAND: (PartnerSelection.RANDOM, Recombination.COPY),
    Variant.XOVER_BEST: (PartnerSelection.BEST, Recombination.CROSSOVER),
    Variant.XOVER_RAND: (PartnerSelection.RANDOM, Recombination.CROSSOVER),
}


@dataclass
class AgentState:
    """One agent: its genotype, the fitness of that genotype, and its stream."""
    genotype: Genotype
    fitness: float
    rng: AgentRng


class Population:
    """
    Array-backed state of all agents in one run.

    genomes is N x L, fitness is N. Rows are indexed by node id.
    """

    def __init__(
        self,
        genomes: np.ndarray,
        fitness: np.ndarray,
        rngs: Sequence[AgentRng],
        lb: float,
        ub: float,
    ):
        self.genomes = np.array(genomes, dtype=np.float64, copy=True)
        self.fitness = np.array(fitness, dtype=np.float64, copy=True)
        self.rngs = list(rngs)
        self.lb = float(lb)
        self.ub = float(ub)
        if self.genomes.ndim != 2 or self.genomes.shape[0] != self.fitness.shape[0]:
            raise ValueError("genomes must be N x L and match the fitness vector")
        if len(self.rngs) != self.genomes.shape[0]:
            raise ValueError("one random stream per agent is required")
        self.holdout: Optional[np.ndarray] = None
        self.accepted_last = 0

    @property
    def size(self) -> int:
        return self.genomes.shape[0]

    @property
    def genome_length(self) -> int:
        return self.genomes.shape[1]

    @classmethod
    def from_agents(cls, agents: Sequence[AgentState]) -> Population:
        if not agents:
            raise ValueError("at least one agent is required")
        lb, ub = agents[0].genotype.lb, agents[0].genotype.ub
        genomes = np.stack([a.genotype.values for a in agents])
        fitness = np.array([a.fitness for a in agents], dtype=np.float64)
        return cls(genomes, fitness, [a.rng for a in agents], lb, ub)

    def to_agents(self) -> List[AgentState]:
        return [
            AgentState(Genotype(self.genomes[n], self.lb, self.ub), float(self.fitness[n]), self.rngs[n])
            for n in range(self.size)
        ]

    def _draw(self):
        n, length = self.genomes.shape
        uniforms = np.empty((n, 2 + length))
        normals = np.empty((n, length))
        for a, rng in enumerate(self.rngs):
            rng.random(out=uniforms[a])
            rng.standard_normal(out=normals[a])
        return uniforms, normals

    def step(
        self,
        topo: Topology,
        problem: Problem,
        variant: Variant,
        params: OperatorParams,
        direction: Direction,
        crossover_mode: CrossoverMode = CrossoverMode.AUTO,
    ) -> int:
        """
        Advance all agents by one synchronous generation.

        Returns the number of agents whose offspring was accepted.
        """
        uniforms, normals = self._draw()
        current = self.genomes

        partners = _select_partners(
            topo, self.fitness, variant.partner_selection, direction, uniforms[:, 0]
        )
        partner_genomes = current[partners]
        gate = (uniforms[:, 1] < params.cp)[:, None]

        recombination = variant.recombination
        if recombination is Recombination.SELF:
            offspring = current.copy()
        elif recombination is Recombination.COPY:
            offspring = np.where(gate, partner_genomes, current)
        elif crossover_mode.resolve(self.genome_length) is CrossoverMode.ARITHMETIC:
            offspring = np.where(gate, mix_arithmetic(current, partner_genomes), current)
        else:
            mask = crossover_mask(uniforms[:, 2:], params.cr)
            offspring = np.where(gate, mix_uniform(current, partner_genomes, mask), current)

        offspring = mutate_clamped(offspring, normals, params.mr, self.lb, self.ub)
        candidate_fitness = problem.evaluate_population(offspring)

        accept = direction.better(candidate_fitness, self.fitness)
        self.genomes[accept] = offspring[accept]
        self.fitness[accept] = candidate_fitness[accept]
        if self.holdout is not None and accept.any():
            self.holdout[accept] = problem.holdout_population(offspring[accept], np.flatnonzero(accept))
        self.accepted_last = int(accept.sum())
        return self.accepted_last

    def collective(self, mode: str = "mean") -> float:
        return collective_fitness(self.fitness, mode)

    def collective_holdout(self, mode: str = "mean") -> Optional[float]:
        if self.holdout is None:
            return None
        return collective_fitness(self.holdout, mode)


def _select_partners(
    topo: Topology,
    fitness: np.ndarray,
    selection: PartnerSelection,
    direction: Direction,
    partner_draws: np.ndarray,
) -> np.ndarray:
    """
    Partner index per agent. Agents without neighbors (and HillClimbing)
    get themselves, which turns any recombination into a no-op.
    """
    n = fitness.shape[0]
    own = np.arange(n)
    if selection is PartnerSelection.NONE:
        return own

    matrix, degree = topo.padded_neighbors
    has_neighbors = degree > 0
    safe = np.where(matrix >= 0, matrix, 0)

    if selection is PartnerSelection.RANDOM:
        slot = np.minimum((partner_draws * degree).astype(np.int64), np.maximum(degree - 1, 0))
        chosen = safe[own, slot]
    else:
        pad = np.inf if direction is Direction.MINIMIZE else -np.inf
        scores = np.where(matrix >= 0, fitness[safe], pad)
        # argmin/argmax return the first hit; rows are ascending, so ties go to the lowest id.
        slot = scores.argmin(axis=1) if direction is Direction.MINIMIZE else scores.argmax(axis=1)
        chosen = safe[own, slot]

    return np.where(has_neighbors, chosen, own)


def step_generation(
    agents: Sequence[AgentState],
    topo: Topology,
    problem: Problem,
    variant: Variant,
    params: OperatorParams,
    direction: Direction,
    crossover_mode: CrossoverMode = CrossoverMode.AUTO,
) -> List[AgentState]:
    """
    One synchronous generation over a list of agent states.

    The input states are not modified; the returned list holds the
    generation-(g+1) states (random streams are shared and advance).
    """
    if len(agents) != topo.node_count:
        raise ValueError(f"{len(agents)} agents for a topology with {topo.node_count} nodes")
    population = Population.from_agents(agents)
    population.step(topo, problem, variant, params, direction, crossover_mode)
    return population.to_agents()


def best_neighbor(
    agents: Sequence[AgentState],
    topo: Topology,
    n: NodeId,
    direction: Direction,
) -> NodeId:
    """Neighbor with the best fitness; ties go to the lowest node id."""
    neighbors = topo.neighbors(n)
    if not neighbors:
        raise EmptyNeighborhoodError(n)
    best = neighbors[0]
    for m in neighbors[1:]:
        if direction.better(agents[m].fitness, agents[best].fitness):
            best = m
    return best


def random_neighbor(
    agents: Sequence[AgentState],
    topo: Topology,
    n: NodeId,
    rng: AgentRng,
) -> NodeId:
    """Uniformly drawn neighbor, using the focal agent's stream."""
    neighbors = topo.neighbors(n)
    if not neighbors:
        raise EmptyNeighborhoodError(n)
    k = len(neighbors)
    return neighbors[min(int(rng.random() * k), k - 1)]


def collective_fitness(agents, mode: str = "mean") -> float:
    """
    Aggregate fitness of the network: mean (default) or sum.

    Accepts a sequence of AgentState or an array of fitness values.
    """
    if isinstance(agents, np.ndarray):
        values = agents
    else:
        values = np.array([a.fitness for a in agents], dtype=np.float64)
    if values.size == 0:
        raise ValueError("collective fitness needs at least one agent")
    if mode == "mean":
        return float(values.mean())
    if mode == "sum":
        return float(values.sum())
    raise ValueError(f"Unknown collective mode {mode!r}")


def initialize_population(
    problem: Problem,
    master_seed: int,
    cell: int,
    run: int,
    initial_genomes: Optional[np.ndarray] = None,
) -> Population:
    """
    Uniform random initialization and generation-0 evaluation.

    Initial genes come from a dedicated initialization stream per agent so
    the per-generation agent streams start untouched. Passing the same `cell`
    for two variants gives them identical initial genotypes and streams.
    """
    n, length = problem.node_count, problem.genome_length
    lb, ub = problem.bounds
    rngs = [AgentRng.for_agent(master_seed, cell, run, a) for a in range(n)]
    if initial_genomes is None:
        genomes = np.empty((n, length))
        for a in range(n):
            init = AgentRng(master_seed, (INIT_STREAM, cell, run, a))
            genomes[a] = init.uniform(lb, ub, length)
    else:
        genomes = np.array(initial_genomes, dtype=np.float64)
        if genomes.shape != (n, length):
            raise ValueError(f"initial genomes must be {n} x {length}, got {genomes.shape}")
        genomes = np.clip(genomes, lb, ub)
    population = Population(genomes, problem.evaluate_population(genomes), rngs, lb, ub)
    holdout = problem.holdout_population(population.genomes, np.arange(n))
    if holdout is not None:
        population.holdout = np.array(holdout, dtype=np.float64)
    return population
