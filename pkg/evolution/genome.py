"""
Genotype representation and evolutionary operators.

Operators:
- random_init: uniform sampling within [lb, ub]
- uniform_crossover: copy the partner, then take each of our genes with prob. cr
- arithmetic_crossover: mean of two single-parameter parents
- gaussian_mutate: additive N(0, mr) per gene, clamped to [lb, ub]

The array kernels at the bottom are shared with the population step in
evolution.engine so both paths compute offspring identically.
"""

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from evolution.rng import AgentRng


class GenomeError(ValueError):
    """Invalid genotype or operator parameters."""


@dataclass(frozen=True)
class Genotype:
    """Bounded real vector of behavior parameters."""
    values: np.ndarray
    lb: float
    ub: float

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64).reshape(-1)
        lb, ub = float(self.lb), float(self.ub)
        if values.size < 1:
            raise GenomeError("Genotype must have at least one gene")
        if not lb < ub:
            raise GenomeError(f"Invalid bounds [{lb}, {ub}]")
        if np.any(values < lb) or np.any(values > ub) or not np.all(np.isfinite(values)):
            raise GenomeError(f"Genotype values outside [{lb}, {ub}]")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "lb", lb)
        object.__setattr__(self, "ub", ub)

    def __len__(self) -> int:
        return int(self.values.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Genotype):
            return NotImplemented
        return (
            self.lb == other.lb
            and self.ub == other.ub
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None

    def with_values(self, values: Union[np.ndarray, Sequence[float]]) -> "Genotype":
        return Genotype(np.asarray(values, dtype=np.float64), self.lb, self.ub)


@dataclass(frozen=True)
class OperatorParams:
    """Crossover probability, crossover rate and mutation std. dev."""
    cp: float = 0.5
    cr: float = 0.5
    mr: float = 0.001

    def __post_init__(self):
        if not 0.0 <= self.cp <= 1.0:
            raise GenomeError(f"cp must be in [0, 1], got {self.cp}")
        if not 0.0 <= self.cr <= 1.0:
            raise GenomeError(f"cr must be in [0, 1], got {self.cr}")
        if not self.mr > 0.0:
            raise GenomeError(f"mr must be > 0, got {self.mr}")


def random_init(length: int, lb: float, ub: float, rng: AgentRng) -> Genotype:
    """Sample each gene i.i.d. uniform on [lb, ub]."""
    if int(length) < 1:
        raise GenomeError(f"Genotype length must be >= 1, got {length}")
    if not lb < ub:
        raise GenomeError(f"Invalid bounds [{lb}, {ub}]")
    return Genotype(rng.uniform(lb, ub, int(length)), lb, ub)


def _check_compatible(a: Genotype, b: Genotype) -> None:
    if len(a) != len(b):
        raise GenomeError(f"Length mismatch: {len(a)} vs {len(b)}")
    if a.lb != b.lb or a.ub != b.ub:
        raise GenomeError("Parents have different bounds")


def uniform_crossover(
    self_g: Genotype,
    partner: Genotype,
    params: OperatorParams,
    rng: AgentRng,
) -> Genotype:
    """
    Offspring starts as a copy of `partner`; each position is then overwritten
    with `self_g`'s gene with probability cr. The cp gate belongs to the caller.
    """
    _check_compatible(self_g, partner)
    mask = crossover_mask(rng.random(len(self_g)), params.cr)
    return self_g.with_values(mix_uniform(self_g.values, partner.values, mask))


def arithmetic_crossover(self_g: Genotype, partner: Genotype) -> Genotype:
    """Mean of two single-parameter parents."""
    if len(self_g) != 1 or len(partner) != 1:
        raise GenomeError("Arithmetic crossover needs single-parameter genotypes")
    _check_compatible(self_g, partner)
    return self_g.with_values(mix_arithmetic(self_g.values, partner.values))


def gaussian_mutate(g: Genotype, mr: float, rng: AgentRng) -> Genotype:
    """Add N(0, mr) noise to every gene independently, then clamp to bounds."""
    if not mr > 0.0:
        raise GenomeError(f"mr must be > 0, got {mr}")
    noise = rng.standard_normal(len(g))
    return g.with_values(mutate_clamped(g.values, noise, mr, g.lb, g.ub))


# ============================================================================
# ARRAY KERNELS
# ============================================================================

def crossover_mask(uniforms: np.ndarray, cr: float) -> np.ndarray:
    """True where the focal agent keeps its own gene."""
    return uniforms < cr


def mix_uniform(own: np.ndarray, partner: np.ndarray, mask: np.ndarray) -> np.ndarray:
    return np.where(mask, own, partner)


def mix_arithmetic(own: np.ndarray, partner: np.ndarray) -> np.ndarray:
    return (own + partner) / 2.0


def mutate_clamped(
    values: np.ndarray,
    standard_noise: np.ndarray,
    mr: float,
    lb: float,
    ub: float,
) -> np.ndarray:
    return np.clip(values + mr * standard_noise, lb, ub)
