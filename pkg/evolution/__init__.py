"""
Evolutionary core.

This package contains:
- Seeded per-agent random streams
- Genotypes and the crossover/mutation operators
- The synchronous population step for the five algorithm variants
"""

from evolution.engine import (
    AgentState,
    CrossoverMode,
    Direction,
    EmptyNeighborhoodError,
    Population,
    Variant,
    initialize_population,
    step_generation,
)
from evolution.genome import GenomeError, Genotype, OperatorParams
from evolution.rng import AgentRng

__all__ = [
    'AgentRng',
    'AgentState',
    'CrossoverMode',
    'Direction',
    'EmptyNeighborhoodError',
    'GenomeError',
    'Genotype',
    'OperatorParams',
    'Population',
    'Variant',
    'initialize_population',
    'step_generation',
]
