"""
Unit tests for the Embodied Evolution engine.

Tests partner selection, variant equivalences, strict acceptance and
reproducibility of the synchronous step.
"""

import numpy as np
import pytest

from evolution.engine import (
    AgentState,
    CrossoverMode,
    Direction,
    EmptyNeighborhoodError,
    Population,
    Variant,
    best_neighbor,
    collective_fitness,
    initialize_population,
    random_neighbor,
    step_generation,
)
from evolution.genome import GenomeError, Genotype, OperatorParams
from evolution.rng import AgentRng
from network.topology import GraphTopology, GridTopology
from problems.base import Problem


class FlatProblem(Problem):
    """Every genotype scores the same."""

    name = "flat"

    def __init__(self, nodes: int, length: int = 4):
        self._nodes = nodes
        self._length = length

    @property
    def node_count(self):
        return self._nodes

    @property
    def genome_length(self):
        return self._length

    @property
    def bounds(self):
        return 0.0, 1.0

    def evaluate(self, node, values):
        return 1.0


def _evolve(problem, topo, variant, params, generations=15, cell=0):
    population = initialize_population(problem, master_seed=3, cell=cell, run=0)
    for _ in range(generations):
        population.step(topo, problem, variant, params, problem.direction)
    return population


def _agents(fitness):
    return [AgentState(Genotype([0.5], 0, 1), f, AgentRng(0, (i,))) for i, f in enumerate(fitness)]


class TestPartnerSelection:
    """Test suite for neighbor choice."""

    def test_best_neighbor_minimize(self, small_grid):
        fitness = np.linspace(1.0, 0.0, 20)
        agents = _agents(fitness)
        # node 0 sees 1, 5, 6; node 6 has the lowest error
        assert best_neighbor(agents, small_grid, 0, Direction.MINIMIZE) == 6
        assert best_neighbor(agents, small_grid, 0, Direction.MAXIMIZE) == 1

    def test_best_neighbor_ties_go_to_lowest_id(self, small_grid):
        agents = _agents(np.zeros(20))
        assert best_neighbor(agents, small_grid, 6, Direction.MINIMIZE) == 0

    def test_random_neighbor_is_a_neighbor(self, small_grid):
        agents = _agents(np.zeros(20))
        rng = AgentRng(1, (0,))
        picks = {random_neighbor(agents, small_grid, 6, rng) for _ in range(200)}
        assert picks == set(small_grid.neighbors(6))

    def test_random_neighbor_is_uniform(self, small_grid):
        agents = _agents(np.zeros(20))
        rng = AgentRng(7, (6,))
        neighbors = small_grid.neighbors(6)
        assert len(neighbors) == 8
        draws = np.array([random_neighbor(agents, small_grid, 6, rng) for _ in range(100_000)])
        for node in neighbors:
            assert np.mean(draws == node) == pytest.approx(0.125, abs=0.01)

    def test_empty_neighborhood(self):
        graph = GraphTopology(2, frozenset())
        with pytest.raises(EmptyNeighborhoodError):
            best_neighbor(_agents([0.0, 1.0]), graph, 0, Direction.MINIMIZE)


class TestVariantEquivalence:
    """Parameter settings under which variants coincide."""

    def test_xover_with_cp_zero_is_hill_climbing(self, imitation_problem, small_grid):
        hill = _evolve(imitation_problem, small_grid, Variant.HILL_CLIMBING, OperatorParams(cp=0.7, cr=0.3, mr=0.05))
        xover = _evolve(imitation_problem, small_grid, Variant.XOVER_RAND, OperatorParams(cp=0.0, cr=0.3, mr=0.05))
        np.testing.assert_array_equal(hill.genomes, xover.genomes)

    def test_xover_rand_full_exchange_is_copy_rand(self, imitation_problem, small_grid):
        copy = _evolve(imitation_problem, small_grid, Variant.COPY_RAND, OperatorParams(cp=1.0, cr=0.0, mr=0.05))
        xover = _evolve(imitation_problem, small_grid, Variant.XOVER_RAND, OperatorParams(cp=1.0, cr=0.0, mr=0.05))
        np.testing.assert_array_equal(copy.genomes, xover.genomes)

    def test_xover_best_full_exchange_is_copy_best(self, imitation_problem, small_grid):
        copy = _evolve(imitation_problem, small_grid, Variant.COPY_BEST, OperatorParams(cp=1.0, cr=0.0, mr=0.05))
        xover = _evolve(imitation_problem, small_grid, Variant.XOVER_BEST, OperatorParams(cp=1.0, cr=0.0, mr=0.05))
        np.testing.assert_array_equal(copy.genomes, xover.genomes)

    def test_copy_with_cp_zero_is_hill_climbing(self, imitation_problem, small_grid):
        hill = _evolve(imitation_problem, small_grid, Variant.HILL_CLIMBING, OperatorParams(mr=0.05))
        copy = _evolve(imitation_problem, small_grid, Variant.COPY_BEST, OperatorParams(cp=0.0, mr=0.05))
        np.testing.assert_array_equal(hill.genomes, copy.genomes)

    def test_isolated_agent_only_hill_climbs(self, gradient_frames):
        from problems.imitation import ImitationProblem

        problem = ImitationProblem(gradient_frames[:, :1, :2])
        isolated = GraphTopology(2, frozenset())
        hill = _evolve(problem, isolated, Variant.HILL_CLIMBING, OperatorParams(mr=0.05))
        xover = _evolve(problem, isolated, Variant.XOVER_BEST, OperatorParams(cp=1.0, cr=0.5, mr=0.05))
        np.testing.assert_array_equal(hill.genomes, xover.genomes)


class TestStep:
    """Test suite for the synchronous generation."""

    @pytest.mark.parametrize("variant", list(Variant))
    def test_local_fitness_never_worsens(self, imitation_problem, small_grid, variant):
        population = initialize_population(imitation_problem, 11, 0, 0)
        params = OperatorParams(cp=0.5, cr=0.5, mr=0.05)
        previous = population.fitness.copy()
        for _ in range(30):
            population.step(small_grid, imitation_problem, variant, params, Direction.MINIMIZE)
            assert np.all(population.fitness <= previous)
            previous = population.fitness.copy()

    def test_fitness_matches_genomes(self, imitation_problem, small_grid):
        population = _evolve(imitation_problem, small_grid, Variant.XOVER_BEST, OperatorParams(mr=0.05))
        np.testing.assert_allclose(population.fitness, imitation_problem.evaluate_population(population.genomes))

    def test_equal_fitness_is_rejected(self, small_grid):
        problem = FlatProblem(small_grid.node_count)
        population = initialize_population(problem, 0, 0, 0)
        before = population.genomes.copy()
        accepted = population.step(small_grid, problem, Variant.COPY_RAND, OperatorParams(cp=1.0), Direction.MINIMIZE)
        assert accepted == 0
        np.testing.assert_array_equal(population.genomes, before)

    def test_arithmetic_crossover_needs_one_gene(self, imitation_problem, small_grid):
        population = initialize_population(imitation_problem, 0, 0, 0)
        with pytest.raises(GenomeError, match="single-parameter"):
            population.step(small_grid, imitation_problem, Variant.XOVER_RAND, OperatorParams(cp=1.0),
                            Direction.MINIMIZE, CrossoverMode.ARITHMETIC)

    def test_genes_stay_within_bounds(self, imitation_problem, small_grid):
        population = _evolve(imitation_problem, small_grid, Variant.XOVER_RAND, OperatorParams(mr=0.5), generations=10)
        assert population.genomes.min() >= 0.0 and population.genomes.max() <= 1.0

    def test_step_generation_leaves_input_untouched(self, imitation_problem, small_grid):
        agents = initialize_population(imitation_problem, 2, 0, 0).to_agents()
        snapshot = [a.genotype.values.copy() for a in agents]
        following = step_generation(agents, small_grid, imitation_problem, Variant.COPY_BEST,
                                    OperatorParams(cp=1.0, mr=0.05), Direction.MINIMIZE)
        assert len(following) == len(agents)
        for agent, values in zip(agents, snapshot):
            np.testing.assert_array_equal(agent.genotype.values, values)

    def test_step_generation_checks_size(self, imitation_problem):
        agents = initialize_population(imitation_problem, 2, 0, 0).to_agents()
        with pytest.raises(ValueError):
            step_generation(agents, GridTopology(2, 2), imitation_problem, Variant.HILL_CLIMBING,
                            OperatorParams(), Direction.MINIMIZE)


class TestInitialization:
    """Test suite for seeding and generation 0."""

    def test_same_cell_key_same_start(self, imitation_problem):
        a = initialize_population(imitation_problem, 9, cell=0, run=1)
        b = initialize_population(imitation_problem, 9, cell=0, run=1)
        np.testing.assert_array_equal(a.genomes, b.genomes)

    def test_runs_and_cells_differ(self, imitation_problem):
        base = initialize_population(imitation_problem, 9, cell=0, run=0)
        assert not np.array_equal(base.genomes, initialize_population(imitation_problem, 9, 0, 1).genomes)
        assert not np.array_equal(base.genomes, initialize_population(imitation_problem, 9, 1, 0).genomes)

    def test_initial_genomes_shape_checked(self, imitation_problem):
        with pytest.raises(ValueError):
            initialize_population(imitation_problem, 0, 0, 0, initial_genomes=np.zeros((3, 3)))

    def test_initial_genomes_are_used(self, imitation_problem):
        truth = imitation_problem.truth_genomes()
        population = initialize_population(imitation_problem, 0, 0, 0, initial_genomes=truth)
        np.testing.assert_array_equal(population.fitness, 0.0)


class TestCollectiveFitness:
    """Test suite for the network aggregate."""

    def test_mean_and_sum(self):
        values = np.array([0.1, 0.2, 0.3])
        assert collective_fitness(values) == pytest.approx(0.2)
        assert collective_fitness(values, "sum") == pytest.approx(0.6)

    def test_agent_states(self):
        assert collective_fitness(_agents([1.0, 3.0])) == 2.0

    @pytest.mark.parametrize("values, mode", [(np.array([]), "mean"), (np.array([1.0]), "median")])
    def test_invalid(self, values, mode):
        with pytest.raises(ValueError):
            collective_fitness(values, mode)

    def test_population_holds_one_stream_per_agent(self):
        with pytest.raises(ValueError):
            Population(np.zeros((2, 3)), np.zeros(2), [AgentRng(0)], 0.0, 1.0)
