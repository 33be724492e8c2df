"""Expected number of components exchanged by uniform crossover."""

from typing import Iterable, Tuple

import pandas as pd

from evolution.genome import GenomeError


def expected_exchanged_genes(cp: float, cr: float, length: int) -> Tuple[float, float]:
    """
    Expected number of positions where the focal agent's gene overwrites the
    partner copy (each position is exchanged with probability cr).

    Returns:
        (per fired crossover, per generation attempt) = (cr * length, cp * cr * length)
    """
    if not (0.0 <= cp <= 1.0 and 0.0 <= cr <= 1.0):
        raise GenomeError(f"cp and cr must be in [0, 1], got cp={cp}, cr={cr}")
    if int(length) < 1:
        raise GenomeError(f"genotype length must be positive, got {length}")
    per_crossover = cr * int(length)
    return per_crossover, cp * per_crossover


def exchange_table(cps: Iterable[float], crs: Iterable[float], length: int) -> pd.DataFrame:
    """Expected exchange for every (cp, cr) combination."""
    rows = []
    crs = list(crs)
    for cp in cps:
        for cr in crs:
            per_crossover, per_generation = expected_exchanged_genes(cp, cr, length)
            rows.append({"cp": cp, "cr": cr, "length": int(length),
                         "per_crossover": per_crossover, "per_generation": per_generation})
    return pd.DataFrame(rows)
