"""
Nonparametric comparison of algorithm configurations.

- wilcoxon_rank_sum: two-sided rank-sum test between two samples, exact for
  small samples and normal-approximated otherwise
- pairwise_wilcoxon: the test for every pair of configurations
- friedman_nemenyi: per-block ranking, Friedman and Iman-Davenport tests,
  Nemenyi critical difference and groups of indistinguishable configurations
"""

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Sequence, Tuple

import numpy as np
from scipy.stats import chi2 as chi2_dist
from scipy.stats import f as f_dist
from scipy.stats import norm, rankdata

from evolution.engine import Direction
from stats.studentized import StatsError, nemenyi_q

__all__ = [
    "CdResult",
    "PairwiseResult",
    "SampleMatrix",
    "StatsError",
    "friedman_nemenyi",
    "pairwise_wilcoxon",
    "wilcoxon_rank_sum",
]

EXACT_MAX_N = 10
_TOLERANCE = 1e-9


def _sample(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64).reshape(-1)
    if arr.size == 0:
        raise StatsError(f"sample {name} is empty")
    if not np.all(np.isfinite(arr)):
        raise StatsError(f"sample {name} contains non-finite values")
    return arr


def _exact_p(ranks: np.ndarray, n1: int, observed: float) -> float:
    """P(|W - E| >= |w - E|) over all assignments of the pooled ranks to sample a."""
    total = ranks.size
    expected = n1 * (total + 1) / 2.0
    index = np.array(list(combinations(range(total), n1)), dtype=np.intp)
    sums = ranks[index].sum(axis=1)
    extreme = np.abs(sums - expected) >= abs(observed - expected) - _TOLERANCE
    return float(extreme.mean())


def _normal_p(ranks: np.ndarray, n1: int, n2: int, observed: float) -> float:
    total = n1 + n2
    u = observed - n1 * (n1 + 1) / 2.0
    mu = n1 * n2 / 2.0
    _, ties = np.unique(ranks, return_counts=True)
    tie_term = (ties ** 3 - ties).sum() / (total * (total - 1))
    sigma = np.sqrt(n1 * n2 / 12.0 * ((total + 1) - tie_term))
    if sigma == 0:
        return 1.0
    z = max(abs(u - mu) - 0.5, 0.0) / sigma
    return float(min(1.0, 2.0 * norm.sf(z)))


def wilcoxon_rank_sum(a, b, alpha: float = 0.05) -> Tuple[float, bool]:
    """
    Two-sided Wilcoxon rank-sum test.

    Exact (enumeration over pooled mid-ranks) when both samples have at most
    10 values, normal approximation with tie and continuity correction
    otherwise.

    Returns:
        (p-value, equivalent) where equivalent means H0 is accepted (p >= alpha)
    """
    a, b = _sample(a, "a"), _sample(b, "b")
    if not 0.0 < alpha < 1.0:
        raise StatsError(f"alpha must be in (0, 1), got {alpha}")
    ranks = rankdata(np.concatenate([a, b]))
    observed = ranks[:a.size].sum()
    if a.size <= EXACT_MAX_N and b.size <= EXACT_MAX_N:
        p = _exact_p(ranks, a.size, observed)
    else:
        p = _normal_p(ranks, a.size, b.size, observed)
    return p, bool(p >= alpha)


@dataclass
class SampleMatrix:
    """
    Final scores of k configurations over N blocks.

    scores[i, j] is configuration j's score in block i (a run index or an
    agent); direction tells which end of the scale is better.
    """
    labels: List[str]
    scores: np.ndarray
    direction: Direction = Direction.MINIMIZE

    def __post_init__(self):
        self.labels = list(self.labels)
        self.scores = np.asarray(self.scores, dtype=np.float64)
        if self.scores.ndim != 2 or self.scores.shape[1] != len(self.labels):
            raise StatsError(f"scores must be blocks x {len(self.labels)}, got {self.scores.shape}")
        if len(set(self.labels)) != len(self.labels):
            raise StatsError("configuration labels must be unique")
        if not np.all(np.isfinite(self.scores)):
            raise StatsError("scores contain non-finite values")
        self.direction = Direction(self.direction)

    @classmethod
    def from_samples(
        cls,
        labels: Sequence[str],
        samples: Sequence[Sequence[float]],
        direction: Direction = Direction.MINIMIZE,
    ) -> "SampleMatrix":
        """Build from one list of scores per configuration (equal lengths)."""
        if len(labels) != len(samples):
            raise StatsError(f"{len(labels)} labels for {len(samples)} samples")
        lengths = {len(s) for s in samples}
        if len(lengths) > 1:
            raise StatsError(f"unequal sample lengths {sorted(lengths)}")
        return cls(list(labels), np.column_stack([np.asarray(s, dtype=np.float64) for s in samples]), direction)

    @property
    def blocks(self) -> int:
        return self.scores.shape[0]

    @property
    def k(self) -> int:
        return self.scores.shape[1]

    def column(self, label: str) -> np.ndarray:
        return self.scores[:, self.labels.index(label)]


@dataclass
class PairwiseResult:
    labels: List[str]
    p_values: np.ndarray
    equivalent: np.ndarray
    alpha: float


def pairwise_wilcoxon(matrix: SampleMatrix, alpha: float = 0.05) -> PairwiseResult:
    """Rank-sum test for every pair of configurations (diagonal: NaN / equivalent)."""
    k = matrix.k
    p_values = np.full((k, k), np.nan)
    equivalent = np.eye(k, dtype=bool)
    for i, j in combinations(range(k), 2):
        p, same = wilcoxon_rank_sum(matrix.scores[:, i], matrix.scores[:, j], alpha)
        p_values[i, j] = p_values[j, i] = p
        equivalent[i, j] = equivalent[j, i] = same
    return PairwiseResult(matrix.labels, p_values, equivalent, alpha)


@dataclass
class CdResult:
    """Average ranks, critical difference and groups of a Friedman/Nemenyi analysis."""
    labels: List[str]
    avg_ranks: np.ndarray
    cd: float
    q: float
    alpha: float
    blocks: int
    groups: List[Tuple[str, ...]] = field(default_factory=list)
    friedman_chi2: float = float("nan")
    friedman_p: float = float("nan")
    iman_davenport_f: float = float("nan")
    iman_davenport_p: float = float("nan")

    def ranking(self) -> List[Tuple[str, float]]:
        """(label, average rank) from best to worst; ties keep input order."""
        order = np.argsort(self.avg_ranks, kind="stable")
        return [(self.labels[i], float(self.avg_ranks[i])) for i in order]

    def rank_of(self, label: str) -> float:
        return float(self.avg_ranks[self.labels.index(label)])

    def different(self, a: str, b: str) -> bool:
        """Whether two configurations' average ranks differ by more than CD."""
        return abs(self.rank_of(a) - self.rank_of(b)) > self.cd

    def as_dict(self) -> Dict[str, float]:
        return {
            "cd": self.cd,
            "q": self.q,
            "alpha": self.alpha,
            "blocks": self.blocks,
            "friedman_chi2": self.friedman_chi2,
            "friedman_p": self.friedman_p,
            "iman_davenport_f": self.iman_davenport_f,
            "iman_davenport_p": self.iman_davenport_p,
        }


def _cd_groups(labels: Sequence[str], avg_ranks: np.ndarray, cd: float) -> List[Tuple[str, ...]]:
    """Maximal runs of consecutive ranked configurations spanning at most CD."""
    order = np.argsort(avg_ranks, kind="stable")
    ranks = avg_ranks[order]
    groups = []
    last_end = -1
    for i in range(len(ranks)):
        j = i
        while j + 1 < len(ranks) and ranks[j + 1] - ranks[i] <= cd:
            j += 1
        if j > i and j > last_end:
            groups.append(tuple(labels[order[m]] for m in range(i, j + 1)))
            last_end = j
    return groups


def friedman_nemenyi(matrix: SampleMatrix, alpha: float = 0.05) -> CdResult:
    """
    Rank configurations within each block (mid-ranks, best = 1), average the
    ranks and compute the Nemenyi critical difference

        CD = q_alpha * sqrt(k (k + 1) / (6 N))
    """
    k, n = matrix.k, matrix.blocks
    if k < 2:
        raise StatsError(f"need at least 2 configurations, got {k}")
    if n < 2:
        raise StatsError(f"need at least 2 blocks, got {n}")
    q = nemenyi_q(k, alpha)

    oriented = matrix.scores if matrix.direction is Direction.MINIMIZE else -matrix.scores
    ranks = rankdata(oriented, axis=1)
    avg = ranks.mean(axis=0)
    cd = float(q * np.sqrt(k * (k + 1) / (6.0 * n)))

    chi2 = max(0.0, float(12.0 * n / (k * (k + 1)) * ((avg ** 2).sum() - k * (k + 1) ** 2 / 4.0)))
    chi2_p = float(chi2_dist.sf(chi2, k - 1))
    denominator = n * (k - 1) - chi2
    if denominator <= 0:
        f_stat, f_p = float("inf"), 0.0
    else:
        f_stat = (n - 1) * chi2 / denominator
        f_p = float(f_dist.sf(f_stat, k - 1, (k - 1) * (n - 1)))

    return CdResult(
        labels=list(matrix.labels),
        avg_ranks=avg,
        cd=cd,
        q=q,
        alpha=alpha,
        blocks=n,
        groups=_cd_groups(matrix.labels, avg, cd),
        friedman_chi2=chi2,
        friedman_p=chi2_p,
        iman_davenport_f=f_stat,
        iman_davenport_p=f_p,
    )
