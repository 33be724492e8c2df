"""
Result files of a campaign.

Layout of an output directory:
    campaign.yaml                        resolved configuration (sweep expanded)
    cells.csv                            cell,label,variant,cp,cr,mr,direction,problem
    trajectory_<cell>_<run>.csv          generation,collective_fitness[,test_accuracy]
    agents_<cell>_<run>.csv              node,fitness[,test_accuracy] (optional)
    snap_<cell>_<run>_g<gen>.pgm         phenotype frames

Floats are written with %.17g so values survive a round trip exactly, and
every writer produces the same bytes for the same results.
"""

from pathlib import Path
from typing import Optional, Sequence

import numpy as np
import pandas as pd
import yaml

from config.campaign import CampaignConfig, CellSpec


FLOAT_FORMAT = "%.17g"
MANIFEST = "cells.csv"
RESOLVED_CONFIG = "campaign.yaml"


def _to_csv(frame: pd.DataFrame, path: Path) -> Path:
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return path


def trajectory_path(out_dir: Path, cell: int, run: int) -> Path:
    return Path(out_dir) / f"trajectory_{cell}_{run}.csv"


def agents_path(out_dir: Path, cell: int, run: int) -> Path:
    return Path(out_dir) / f"agents_{cell}_{run}.csv"


def snapshot_path(out_dir: Path, cell: int, run: int, generation: int, t: Optional[int] = None) -> Path:
    suffix = "" if t is None else f"_t{t}"
    return Path(out_dir) / f"snap_{cell}_{run}_g{generation}{suffix}.pgm"


def write_manifest(out_dir: Path, cfg: CampaignConfig, problem_name: str) -> Path:
    cells: Sequence[CellSpec] = cfg.cells
    frame = pd.DataFrame({
        "cell": range(len(cells)),
        "label": [c.label for c in cells],
        "variant": [c.variant.value for c in cells],
        "cp": [c.cp for c in cells],
        "cr": [c.cr for c in cells],
        "mr": [c.mr for c in cells],
        "direction": cfg.direction.value,
        "problem": problem_name,
    })
    return _to_csv(frame, Path(out_dir) / MANIFEST)


def read_manifest(out_dir: Path) -> pd.DataFrame:
    path = Path(out_dir) / MANIFEST
    if not path.exists():
        raise FileNotFoundError(f"No {MANIFEST} in {out_dir}; not a campaign output directory")
    return pd.read_csv(path)


def write_resolved_config(out_dir: Path, cfg: CampaignConfig) -> Path:
    path = Path(out_dir) / RESOLVED_CONFIG
    path.write_text(yaml.safe_dump(cfg.resolved(), sort_keys=False), encoding="utf-8")
    return path


def write_trajectory(
    path: Path,
    collective: np.ndarray,
    test_accuracy: Optional[np.ndarray] = None,
) -> Path:
    frame = pd.DataFrame({
        "generation": np.arange(len(collective)),
        "collective_fitness": collective,
    })
    if test_accuracy is not None:
        frame["test_accuracy"] = test_accuracy
    return _to_csv(frame, path)


def read_trajectory(path: Path) -> pd.DataFrame:
    return pd.read_csv(path, float_precision="round_trip")


def write_agents(path: Path, fitness: np.ndarray, holdout: Optional[np.ndarray] = None) -> Path:
    frame = pd.DataFrame({"node": np.arange(len(fitness)), "fitness": fitness})
    if holdout is not None:
        frame["test_accuracy"] = holdout
    return _to_csv(frame, path)
