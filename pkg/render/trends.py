"""
Fitness trends across runs.

Reads the trajectories of a campaign output directory and summarizes each
cell's collective fitness (and test accuracy, when recorded) per generation
as mean and standard deviation over runs.
"""

from pathlib import Path
from typing import Iterable, Optional, Union

import pandas as pd
from loguru import logger

from runner.outputs import FLOAT_FORMAT, read_manifest, read_trajectory


def summarize_trajectories(results_dir: Union[str, Path], labels: Optional[Iterable[str]] = None) -> pd.DataFrame:
    """
    Long-format summary: one row per (cell, generation).

    Columns: cell, label, generation, runs, <metric>_mean, <metric>_std for
    every recorded metric. The std is the sample standard deviation (ddof=1),
    0 when a cell has a single run.
    """
    results_dir = Path(results_dir)
    manifest = read_manifest(results_dir)
    if labels is not None:
        wanted = set(labels)
        manifest = manifest[manifest["label"].isin(wanted)]

    summaries = []
    for cell, label in zip(manifest["cell"], manifest["label"]):
        paths = sorted(results_dir.glob(f"trajectory_{cell}_*.csv"))
        if not paths:
            logger.warning(f"No trajectories for cell {cell} ({label})")
            continue
        runs = pd.concat([read_trajectory(p) for p in paths], ignore_index=True)
        grouped = runs.groupby("generation")
        metrics = [c for c in runs.columns if c != "generation"]
        summary = grouped[metrics].agg(["mean", "std"])
        summary.columns = [f"{metric}_{stat}" for metric, stat in summary.columns]
        summary = summary.fillna({c: 0.0 for c in summary.columns if c.endswith("_std")})
        summary.insert(0, "runs", grouped.size())
        summary = summary.reset_index()
        summary.insert(0, "label", label)
        summary.insert(0, "cell", cell)
        summaries.append(summary)

    if not summaries:
        return pd.DataFrame(columns=["cell", "label", "generation", "runs"])
    return pd.concat(summaries, ignore_index=True)


def write_trend_summary(summary: pd.DataFrame, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    summary.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    logger.info(f"Wrote trend summary ({summary['label'].nunique()} cells) to {path}")
    return path
