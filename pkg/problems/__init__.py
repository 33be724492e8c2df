"""
Benchmark problems.

This package contains:
- Imitation of a grayscale frame sequence
- Illumination of a grid over a 24-hour day
- Distributed presence/activity classification with per-node networks
"""

from problems.base import Problem, ProblemError
from problems.ffnn import FfnnProblem, Task, Window
from problems.illumination import IlluminationMode, IlluminationProblem
from problems.imitation import ImitationProblem

__all__ = [
    'FfnnProblem',
    'IlluminationMode',
    'IlluminationProblem',
    'ImitationProblem',
    'Problem',
    'ProblemError',
    'Task',
    'Window',
]
