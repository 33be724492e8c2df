"""
Statistics inputs and reports.

Reads final scores out of campaign output directories and renders the test
results as text: the pairwise equivalence matrix ('=' where H0 is accepted)
and a line-oriented description of the critical difference diagram.
"""

import io
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Union

import numpy as np
import pandas as pd
from loguru import logger

from evolution.engine import Direction
from runner.outputs import agents_path, read_manifest, read_trajectory, trajectory_path
from stats.nonparametric import CdResult, PairwiseResult, SampleMatrix, StatsError


MATRIX_FILE = "wilcoxon_matrix.csv"
PVALUE_FILE = "wilcoxon_pvalues.csv"
CD_FILE = "cd_plot.txt"
BEST_FILE = "best_per_variant.csv"


def emit_matrix(results: PairwiseResult) -> str:
    """Symmetric CSV: blank diagonal, '=' where the pair is equivalent, blank otherwise."""
    labels = results.labels
    cells = np.where(results.equivalent, "=", "")
    np.fill_diagonal(cells, "")
    frame = pd.DataFrame(cells, index=labels, columns=labels)
    buffer = io.StringIO()
    frame.to_csv(buffer, index_label="", lineterminator="\n")
    return buffer.getvalue()


def emit_pvalues(results: PairwiseResult) -> str:
    frame = pd.DataFrame(results.p_values, index=results.labels, columns=results.labels)
    buffer = io.StringIO()
    frame.to_csv(buffer, index_label="", float_format="%.6g", lineterminator="\n")
    return buffer.getvalue()


def emit_cd_plot_data(cd: CdResult) -> str:
    """
    Plain-text description of a critical difference diagram.

    Lines:
        alpha <a> / k <k> / blocks <N> / q <q> / cd <CD>
        rank <avg rank> <label>                (ascending, best first)
        group <lowest rank> <highest rank> <label> ...
    """
    lines = [
        "# critical difference diagram",
        f"alpha {cd.alpha:g}",
        f"k {len(cd.labels)}",
        f"blocks {cd.blocks}",
        f"q {cd.q:.6g}",
        f"cd {cd.cd:.6g}",
        f"friedman {cd.friedman_chi2:.6g} {cd.friedman_p:.6g}",
        f"iman_davenport {cd.iman_davenport_f:.6g} {cd.iman_davenport_p:.6g}",
    ]
    lines += [f"rank {rank:.6g} {label}" for label, rank in cd.ranking()]
    for group in cd.groups:
        ranks = [cd.rank_of(label) for label in group]
        lines.append(f"group {min(ranks):.6g} {max(ranks):.6g} " + " ".join(group))
    return "\n".join(lines) + "\n"


def best_per_variant(cd: CdResult, variants: Mapping[str, str]) -> Dict[str, str]:
    """
    Best-ranked configuration of every variant.

    Args:
        cd: ranking over configuration labels
        variants: label -> variant name

    Returns:
        variant -> label, ordered from the best variant to the worst
    """
    best: Dict[str, str] = {}
    for label, _ in cd.ranking():
        variant = variants.get(label)
        if variant is None:
            raise StatsError(f"no variant known for configuration {label}")
        best.setdefault(variant, label)
    return best


def _metric_column(columns: Sequence[str], metric: str, blocks: str) -> str:
    fitness = "collective_fitness" if blocks == "runs" else "fitness"
    if metric == "auto":
        return "test_accuracy" if "test_accuracy" in columns else fitness
    if metric == "test_accuracy" and metric not in columns:
        raise StatsError("test accuracy is not recorded for this campaign")
    return metric if metric == "test_accuracy" else fitness


def load_final_scores(
    results_dir: Union[str, Path],
    metric: str = "auto",
    blocks: str = "runs",
) -> SampleMatrix:
    """
    Final-generation scores of every cell of a campaign output directory.

    blocks='runs' gives one block per run index; blocks='agents' uses the
    recorded per-agent fitness averaged over runs, one block per agent.
    Test accuracy is always maximized; collective fitness follows the
    campaign's direction.
    """
    results_dir = Path(results_dir)
    manifest = read_manifest(results_dir)
    runs = sorted(
        int(p.stem.rsplit("_", 1)[1])
        for p in results_dir.glob("trajectory_0_*.csv")
    )
    if not runs:
        raise StatsError(f"no trajectories in {results_dir}")

    columns: List[np.ndarray] = []
    column_name: Optional[str] = None
    for cell in manifest["cell"]:
        finals = []
        for run in runs:
            path = trajectory_path(results_dir, cell, run) if blocks == "runs" else agents_path(results_dir, cell, run)
            if not path.exists():
                raise StatsError(f"missing {path.name}; every cell needs {len(runs)} runs")
            frame = read_trajectory(path)
            if column_name is None:
                column_name = _metric_column(list(frame.columns), metric, blocks)
            if column_name not in frame.columns:
                raise StatsError(f"{path.name} has no {column_name} column")
            if blocks == "runs":
                finals.append(float(frame[column_name].iloc[-1]))
            else:
                finals.append(frame[column_name].to_numpy())
        columns.append(np.asarray(finals) if blocks == "runs" else np.mean(finals, axis=0))

    if column_name == "test_accuracy":
        direction = Direction.MAXIMIZE
    else:
        direction = Direction(manifest["direction"].iloc[0])
    logger.debug(f"Loaded {column_name} of {len(columns)} cells x {len(columns[0])} {blocks} from {results_dir}")
    return SampleMatrix.from_samples(list(manifest["label"]), columns, direction)


def variants_of(results_dir: Union[str, Path]) -> Dict[str, str]:
    manifest = read_manifest(Path(results_dir))
    return dict(zip(manifest["label"], manifest["variant"]))


def write_report(
    out_dir: Union[str, Path],
    pairwise: PairwiseResult,
    cd: CdResult,
    best: Optional[Mapping[str, str]] = None,
) -> List[Path]:
    """Write the equivalence matrix, p-values, CD description and best settings."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, text in ((MATRIX_FILE, emit_matrix(pairwise)), (PVALUE_FILE, emit_pvalues(pairwise)),
                       (CD_FILE, emit_cd_plot_data(cd))):
        path = out_dir / name
        path.write_text(text, encoding="utf-8")
        written.append(path)
    if best:
        path = out_dir / BEST_FILE
        pd.DataFrame({
            "variant": list(best),
            "label": list(best.values()),
            "avg_rank": [cd.rank_of(label) for label in best.values()],
        }).to_csv(path, index=False, float_format="%.6g", lineterminator="\n")
        written.append(path)
    logger.info(f"Wrote statistics report to {out_dir}")
    return written
