"""
Imitation problem.

A grid of agents imitates a sequence of T grayscale frames. With tile = 1
every agent owns one pixel; with tile = k every agent owns a k x k block, so
its genotype holds k*k*T genes laid out time-major:

    index = t * tile**2 + local_row * tile + local_col

Local fitness is the mean absolute error over all owned (pixel, time) pairs.
"""

from typing import Optional, Tuple

import numpy as np

from evolution.engine import Direction
from problems.base import Problem, ProblemError


class ImitationProblem(Problem):
    """Agents on a (rows/tile) x (cols/tile) grid imitating a frame sequence."""

    direction = Direction.MINIMIZE

    def __init__(self, images: np.ndarray, tile: int = 1, name: str = "imitation"):
        frames = np.asarray(images, dtype=np.float64)
        if frames.ndim != 3:
            raise ProblemError(f"images must be T x rows x cols, got shape {frames.shape}")
        if frames.shape[0] < 1:
            raise ProblemError("at least one frame is required")
        if np.any(frames < 0.0) or np.any(frames > 1.0):
            raise ProblemError("frame values must be in [0, 1]")
        tile = int(tile)
        _, rows, cols = frames.shape
        if tile < 1 or rows % tile or cols % tile:
            raise ProblemError(f"tile {tile} does not divide a {rows}x{cols} frame")

        self.name = name
        self.images = frames
        self.tile = tile
        self._truth = _frames_to_genomes(frames, tile)
        self._truth.setflags(write=False)

    @property
    def frame_count(self) -> int:
        return self.images.shape[0]

    @property
    def grid_shape(self) -> Tuple[int, int]:
        _, rows, cols = self.images.shape
        return rows // self.tile, cols // self.tile

    @property
    def node_count(self) -> int:
        rows, cols = self.grid_shape
        return rows * cols

    @property
    def genome_length(self) -> int:
        return self.tile * self.tile * self.frame_count

    @property
    def bounds(self) -> Tuple[float, float]:
        return 0.0, 1.0

    def evaluate(self, node: int, values: np.ndarray) -> float:
        return imitation_fitness(self, node, values)

    def evaluate_population(self, genomes: np.ndarray) -> np.ndarray:
        return np.abs(genomes - self._truth).mean(axis=1)

    def truth_genomes(self) -> np.ndarray:
        return self._truth

    def phenotype_frame(self, genomes: np.ndarray, t: int) -> np.ndarray:
        """Frame at image resolution; a tiled agent paints its whole block."""
        if not 0 <= t < self.frame_count:
            raise ProblemError(f"time index {t} outside 0..{self.frame_count - 1}")
        return _genomes_to_frame(genomes, t, self.tile, self.grid_shape)


def imitation_fitness(p: ImitationProblem, node: int, g) -> float:
    """Mean absolute error between a node's genes and its ground-truth pixels."""
    node = p._check_node(node)
    values = p._check_length(getattr(g, "values", g))
    return float(np.abs(values - p.truth_genomes()[node]).mean())


def _frames_to_genomes(frames: np.ndarray, tile: int) -> np.ndarray:
    t_count, rows, cols = frames.shape
    grid_rows, grid_cols = rows // tile, cols // tile
    # T x R x tile x C x tile -> R x C x T x tile x tile
    blocks = frames.reshape(t_count, grid_rows, tile, grid_cols, tile).transpose(1, 3, 0, 2, 4)
    return np.ascontiguousarray(blocks.reshape(grid_rows * grid_cols, t_count * tile * tile))


def _genomes_to_frame(
    genomes: np.ndarray,
    t: int,
    tile: int,
    grid_shape: Tuple[int, int],
) -> np.ndarray:
    grid_rows, grid_cols = grid_shape
    block = genomes[:, t * tile * tile:(t + 1) * tile * tile]
    block = block.reshape(grid_rows, grid_cols, tile, tile).transpose(0, 2, 1, 3)
    return block.reshape(grid_rows * tile, grid_cols * tile)


def tile_truth(frames: np.ndarray, tile: int) -> np.ndarray:
    """Ground-truth genotypes (N x tile^2*T) for a frame sequence."""
    return _frames_to_genomes(np.asarray(frames, dtype=np.float64), int(tile))


def parameter_total(frames_shape: Tuple[int, int, int], tile: int) -> Optional[int]:
    """Total number of genes in the network for a T x rows x cols sequence."""
    t_count, rows, cols = frames_shape
    if rows % tile or cols % tile:
        return None
    return (rows // tile) * (cols // tile) * tile * tile * t_count
