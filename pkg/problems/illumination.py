"""
Illumination problem.

Every cell (i, j) of a rows x cols grid has an optimal light level over the
24 hours of a day:

    l_j(t) = (sin(2*pi*j/n + 2*pi*t/24) + 1) / 2,   n = cols

Two agent encodings:
- single: one phase parameter x in [0, 50]; the agent emits
  (sin(2*pi*x/50 + 2*pi*t/24) + 1) / 2, compared on the same [0, 1] scale
- vector: 24 light levels in [0, 1], one per hour

Local fitness is the mean absolute difference over the 24 hours.
"""

from enum import Enum
from typing import Tuple

import numpy as np

from evolution.engine import Direction
from problems.base import Problem, ProblemError


HOURS = 24
PHASE_PERIOD = 50.0


class IlluminationMode(str, Enum):
    SINGLE = "single"
    VECTOR = "vector"


def _check_column(j: int, n: int) -> None:
    if not 0 <= j < n:
        raise ProblemError(f"column {j} outside 0..{n - 1}")


def illumination_truth(n: int, j: int, t: int) -> float:
    """Optimal light level of column j at hour t, scaled to [0, 1]."""
    _check_column(j, n)
    if not 0 <= t < HOURS:
        raise ProblemError(f"hour {t} outside 0..{HOURS - 1}")
    return float((np.sin(2 * np.pi * j / n + 2 * np.pi * t / HOURS) + 1.0) / 2.0)


def _truth_table(cols: int) -> np.ndarray:
    """cols x 24 table of scaled optimal light levels."""
    j = np.arange(cols)[:, None]
    t = np.arange(HOURS)[None, :]
    return (np.sin(2 * np.pi * j / cols + 2 * np.pi * t / HOURS) + 1.0) / 2.0


def _single_output(x: np.ndarray) -> np.ndarray:
    """Agent light levels (len(x) x 24) for phase parameters x, scaled to [0, 1]."""
    t = np.arange(HOURS)[None, :]
    return (np.sin(2 * np.pi * np.asarray(x, dtype=np.float64)[:, None] / PHASE_PERIOD
                   + 2 * np.pi * t / HOURS) + 1.0) / 2.0


def illumination_single_fitness(g, i: int, j: int, n: int) -> float:
    """Mean hourly |truth - agent output| for a single phase parameter."""
    values = np.asarray(getattr(g, "values", g), dtype=np.float64).reshape(-1)
    if values.size != 1:
        raise ProblemError(f"single-parameter genotype must have length 1, got {values.size}")
    _check_column(j, n)
    truth = _truth_table(n)[j]
    return float(np.abs(truth - _single_output(values)[0]).mean())


def illumination_vector_fitness(g, i: int, j: int, n: int) -> float:
    """Mean hourly |truth - x_t| for a 24-level genotype."""
    values = np.asarray(getattr(g, "values", g), dtype=np.float64).reshape(-1)
    if values.size != HOURS:
        raise ProblemError(f"vector genotype must have length {HOURS}, got {values.size}")
    _check_column(j, n)
    return float(np.abs(_truth_table(n)[j] - values).mean())


class IlluminationProblem(Problem):
    """A rows x cols grid of lights learning the daily optimal pattern."""

    direction = Direction.MINIMIZE

    def __init__(self, rows: int, cols: int, mode: IlluminationMode = IlluminationMode.VECTOR):
        if int(rows) < 1 or int(cols) < 1:
            raise ProblemError(f"grid must be at least 1x1, got {rows}x{cols}")
        self.rows = int(rows)
        self.cols = int(cols)
        self.mode = IlluminationMode(mode)
        self.name = f"illumination_{self.mode.value}"
        # node n sits in column n % cols
        self._node_truth = np.tile(_truth_table(self.cols), (self.rows, 1))
        self._node_truth.setflags(write=False)

    @property
    def grid_shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def node_count(self) -> int:
        return self.rows * self.cols

    @property
    def genome_length(self) -> int:
        return 1 if self.mode is IlluminationMode.SINGLE else HOURS

    @property
    def bounds(self) -> Tuple[float, float]:
        return (0.0, PHASE_PERIOD) if self.mode is IlluminationMode.SINGLE else (0.0, 1.0)

    def evaluate(self, node: int, values: np.ndarray) -> float:
        node = self._check_node(node)
        i, j = divmod(node, self.cols)
        if self.mode is IlluminationMode.SINGLE:
            return illumination_single_fitness(values, i, j, self.cols)
        return illumination_vector_fitness(values, i, j, self.cols)

    def evaluate_population(self, genomes: np.ndarray) -> np.ndarray:
        return np.abs(self._node_truth - self.outputs(genomes)).mean(axis=1)

    def outputs(self, genomes: np.ndarray) -> np.ndarray:
        """Hourly light levels (N x 24) emitted by each agent."""
        if self.mode is IlluminationMode.SINGLE:
            return _single_output(genomes[:, 0])
        return genomes

    def truth_genomes(self) -> np.ndarray:
        if self.mode is IlluminationMode.SINGLE:
            # x = 50*j/n reproduces column j's phase exactly
            j = np.arange(self.node_count) % self.cols
            return (PHASE_PERIOD * j / self.cols)[:, None].astype(np.float64)
        return np.array(self._node_truth)

    def truth_frame(self, t: int) -> np.ndarray:
        if not 0 <= t < HOURS:
            raise ProblemError(f"hour {t} outside 0..{HOURS - 1}")
        return self._node_truth[:, t].reshape(self.rows, self.cols)

    def phenotype_frame(self, genomes: np.ndarray, t: int) -> np.ndarray:
        if not 0 <= t < HOURS:
            raise ProblemError(f"hour {t} outside 0..{HOURS - 1}")
        return self.outputs(genomes)[:, t].reshape(self.rows, self.cols)
