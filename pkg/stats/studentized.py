"""
Critical values for the Nemenyi test.

q_alpha(k) is the upper alpha quantile of the studentized range for k groups
and infinite degrees of freedom, divided by sqrt(2). The usual tabulated
values are embedded for k <= 30; larger k are computed with scipy.
"""

from functools import lru_cache

import numpy as np
from scipy.stats import studentized_range


class StatsError(ValueError):
    """Invalid input to a statistical test."""


MAX_GROUPS = 50
# Degrees of freedom standing in for infinity in the scipy computation.
_LARGE_DF = 1e6

# k = 2 .. 30
Q_TABLE = {
    0.05: (
        1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164, 3.219,
        3.268, 3.313, 3.354, 3.391, 3.426, 3.458, 3.489, 3.517, 3.544, 3.569,
        3.593, 3.616, 3.637, 3.658, 3.678, 3.696, 3.714, 3.732, 3.749,
    ),
    0.10: (
        1.645, 2.052, 2.291, 2.459, 2.589, 2.693, 2.780, 2.855, 2.920, 2.978,
        3.030, 3.077, 3.120, 3.159, 3.196, 3.230, 3.261, 3.291, 3.319, 3.346,
        3.371, 3.394, 3.417, 3.439, 3.459, 3.479, 3.498, 3.516, 3.533,
    ),
}


@lru_cache(maxsize=None)
def nemenyi_q(k: int, alpha: float = 0.05) -> float:
    """q_alpha for k compared groups (2 <= k <= 50, alpha 0.05 or 0.10)."""
    alpha = round(float(alpha), 10)
    if alpha not in Q_TABLE:
        raise StatsError(f"alpha must be 0.05 or 0.10, got {alpha}")
    if k < 2:
        raise StatsError(f"need at least 2 groups, got {k}")
    if k > MAX_GROUPS:
        raise StatsError(f"Nemenyi critical values are only provided up to {MAX_GROUPS} groups, got {k}")
    if k <= len(Q_TABLE[alpha]) + 1:
        return Q_TABLE[alpha][k - 2]
    return float(studentized_range.ppf(1.0 - alpha, k, _LARGE_DF) / np.sqrt(2.0))
