"""
Statistical comparison of algorithm configurations.

This package contains:
- Wilcoxon rank-sum tests (exact and normal approximation)
- Friedman ranking with the Nemenyi critical difference
- Loading final scores from result directories and writing reports
"""

from stats.nonparametric import (
    CdResult,
    PairwiseResult,
    SampleMatrix,
    StatsError,
    friedman_nemenyi,
    pairwise_wilcoxon,
    wilcoxon_rank_sum,
)

__all__ = [
    'CdResult',
    'PairwiseResult',
    'SampleMatrix',
    'StatsError',
    'friedman_nemenyi',
    'pairwise_wilcoxon',
    'wilcoxon_rank_sum',
]
