"""
Campaign configuration schema.

A campaign file (YAML) names one problem on one topology and a list of
cells (algorithm variant plus operator parameters) to run `runs` times each.
Cells can be listed explicitly or produced from a sweep block.

Example:

    name: imitation_desk
    problem:
      kind: imitation
      images: {source: synthetic, count: 20, rows: 28, cols: 28, downsample: 2}
    topology: {kind: grid, rows: 14, cols: 14}
    sweep:
      variants: [HillClimbing, CopyBest, CopyRand, XoverBest, XoverRand]
      cp: [0.5]
      cr: [0.5]
      mr: [0.001]
    runs: 10
    generations: 3000
"""

import copy
from enum import Enum
from itertools import product
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

import yaml
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from config.config_manager import config_manager
from config.settings import settings
from evolution.engine import CrossoverMode, Direction, Variant
from evolution.genome import OperatorParams
from network.topology import GridTopology, Topology, load_topology


class CampaignConfigError(ValueError):
    """Campaign file is missing, unreadable or fails validation."""

    def __init__(self, source: str, detail: str):
        self.source = source
        self.detail = detail
        super().__init__(f"Invalid campaign {source}: {detail}")


class ProblemKind(str, Enum):
    IMITATION = "imitation"
    ILLUMINATION_SINGLE = "illumination_single"
    ILLUMINATION_VECTOR = "illumination_vector"
    FFNN = "ffnn"

    @property
    def needs_grid(self) -> bool:
        return self is not ProblemKind.FFNN


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ImagesSpec(_Section):
    """Frame sequence for the imitation problem."""
    source: Literal["idx", "synthetic"] = "synthetic"
    path: Optional[str] = None
    count: int = Field(20, ge=1)
    start: int = Field(0, ge=0)
    seed: int = Field(0, ge=0)
    rows: int = Field(28, ge=1, description="Synthetic frame height")
    cols: int = Field(28, ge=1, description="Synthetic frame width")
    downsample: int = Field(1, ge=1, description="Block-mean factor applied after loading")

    @model_validator(mode="after")
    def _path_for_idx(self):
        if self.source == "idx" and not self.path:
            raise ValueError("images.path is required when source is idx")
        return self


class SensorsSpec(_Section):
    """Sensor series for the presence/activity problem."""
    source: Literal["synthetic", "csv"] = "synthetic"
    path: Optional[str] = None
    nodes: Optional[int] = Field(None, ge=1, description="Synthetic node count (default: topology size)")
    samples: int = Field(3000, ge=150)
    seed: int = Field(0, ge=0)

    @model_validator(mode="after")
    def _path_for_csv(self):
        if self.source == "csv" and not self.path:
            raise ValueError("sensors.path is required when source is csv")
        return self


class SplitModel(_Section):
    window_len: int = Field(150, ge=2)
    stride: int = Field(30, ge=1)
    train_fraction: float = Field(0.8, gt=0.0, lt=1.0)
    seed: int = Field(0, ge=0)
    mode: Literal["shuffle", "chronological"] = "shuffle"


class ProblemSpec(_Section):
    kind: ProblemKind
    images: ImagesSpec = Field(default_factory=ImagesSpec)
    tile: int = Field(1, ge=1)
    task: Literal["presence", "activity"] = "presence"
    sensors: SensorsSpec = Field(default_factory=SensorsSpec)
    split: SplitModel = Field(default_factory=SplitModel)
    hidden: int = Field(100, ge=1)
    activation: Literal["sigmoid", "tanh", "relu"] = "sigmoid"

    @property
    def single_gene(self) -> bool:
        """True when every genotype of this problem has exactly one gene."""
        if self.kind is ProblemKind.IMITATION:
            return self.tile == 1 and self.images.count == 1
        return self.kind is ProblemKind.ILLUMINATION_SINGLE


class TopologySpec(_Section):
    kind: Literal["grid", "graph"] = "grid"
    rows: Optional[int] = Field(None, ge=1)
    cols: Optional[int] = Field(None, ge=1)
    path: Optional[str] = None

    @model_validator(mode="after")
    def _complete(self):
        if self.kind == "grid" and (self.rows is None or self.cols is None):
            raise ValueError("grid topology needs rows and cols")
        if self.kind == "graph" and not self.path:
            raise ValueError("graph topology needs a path")
        return self


def _fmt(value: float) -> str:
    return f"{value:g}"


class CellSpec(_Section):
    """One algorithm configuration: a variant and its operator parameters."""
    variant: Variant
    cp: float = Field(0.5, ge=0.0, le=1.0)
    cr: float = Field(0.5, ge=0.0, le=1.0)
    mr: float = Field(0.001, gt=0.0)

    @property
    def label(self) -> str:
        return f"{self.variant.value}_cp{_fmt(self.cp)}_cr{_fmt(self.cr)}_mr{_fmt(self.mr)}"

    @property
    def params(self) -> OperatorParams:
        return OperatorParams(cp=self.cp, cr=self.cr, mr=self.mr)


class SweepSpec(_Section):
    variants: List[Variant] = Field(default_factory=lambda: list(Variant))
    cp: List[float] = Field(default_factory=lambda: [0.5])
    cr: List[float] = Field(default_factory=lambda: [0.5])
    mr: List[float] = Field(default_factory=lambda: [0.001])

    @field_validator("variants", "cp", "cr", "mr")
    @classmethod
    def _non_empty(cls, v):
        if not v:
            raise ValueError("sweep lists must not be empty")
        return v


def expand_sweep(sweep: SweepSpec) -> List[CellSpec]:
    """
    Cartesian product variants x cp x cr x mr.

    Parameters a variant ignores are pinned to 0 and duplicates dropped:
    HillClimbing varies only mr, the Copy variants vary cp and mr.
    """
    cells: List[CellSpec] = []
    seen = set()
    for variant, cp, cr, mr in product(sweep.variants, sweep.cp, sweep.cr, sweep.mr):
        cell = CellSpec(
            variant=variant,
            cp=cp if variant.uses_cp else 0.0,
            cr=cr if variant.uses_cr else 0.0,
            mr=mr,
        )
        if cell.label not in seen:
            seen.add(cell.label)
            cells.append(cell)
    return cells


class StatsSpec(_Section):
    alpha: float = 0.05
    blocks: Literal["runs", "agents"] = "runs"
    metric: Literal["auto", "collective_fitness", "test_accuracy"] = "auto"

    @field_validator("alpha")
    @classmethod
    def _tabulated_alpha(cls, v):
        if v not in (0.05, 0.10):
            raise ValueError("alpha must be 0.05 or 0.10")
        return v


class CampaignConfig(_Section):
    """A validated campaign."""
    name: str = Field(..., min_length=1)
    problem: ProblemSpec
    topology: TopologySpec
    cells: List[CellSpec] = Field(default_factory=list)
    sweep: Optional[SweepSpec] = None
    runs: int = Field(10, ge=1)
    generations: int = Field(..., ge=0)
    master_seed: int = Field(0, ge=0)
    snapshot_generations: List[int] = Field(default_factory=list)
    snapshot_time: List[int] = Field(default_factory=lambda: [0])
    collective: Literal["mean", "sum"] = "mean"
    crossover: CrossoverMode = CrossoverMode.AUTO
    seeding: Literal["per_cell", "common"] = "per_cell"
    threads: Optional[int] = Field(None, ge=1)
    record_agent_fitness: bool = False
    stats: StatsSpec = Field(default_factory=StatsSpec)

    @model_validator(mode="after")
    def _expand_and_check(self):
        if self.sweep is not None:
            known = {c.label for c in self.cells}
            self.cells = self.cells + [c for c in expand_sweep(self.sweep) if c.label not in known]
            self.sweep = None
        if not self.cells:
            raise ValueError("campaign needs at least one cell (cells or sweep)")
        labels = [c.label for c in self.cells]
        if len(set(labels)) != len(labels):
            raise ValueError("cell labels must be unique")
        if self.problem.kind.needs_grid and self.topology.kind != "grid":
            raise ValueError(f"{self.problem.kind.value} needs a grid topology")
        if self.crossover is CrossoverMode.ARITHMETIC and not self.problem.single_gene:
            raise ValueError(f"arithmetic crossover needs single-gene genotypes; {self.problem.kind.value} has more")
        late = [g for g in self.snapshot_generations if not 0 <= g <= self.generations]
        if late:
            raise ValueError(f"snapshot generations {late} outside 0..{self.generations}")
        if any(t < 0 for t in self.snapshot_time):
            raise ValueError("snapshot_time entries must be non-negative")
        return self

    @property
    def direction(self) -> Direction:
        return Direction.MAXIMIZE if self.problem.kind is ProblemKind.FFNN else Direction.MINIMIZE

    @property
    def thread_count(self) -> int:
        return self.threads or settings.runner.threads

    def cell_key(self, index: int) -> int:
        """Seed key of a cell; `common` seeding lets every cell share streams."""
        return 0 if self.seeding == "common" else index

    def resolved(self) -> Dict[str, Any]:
        """Plain-data form with the sweep expanded, for writing next to results."""
        return self.model_dump(mode="json", exclude={"sweep"})


def _absolutize(data: Dict[str, Any], base: Path) -> None:
    """Rewrite relative data paths that exist next to the campaign file."""
    for section, key in (("topology", None), ("problem", "images"), ("problem", "sensors")):
        block = data.get(section)
        if isinstance(block, dict) and key:
            block = block.get(key)
        if not isinstance(block, dict) or not block.get("path"):
            continue
        path = Path(block["path"]).expanduser()
        if not path.is_absolute():
            for root in (base, config_manager.config_dir):
                if (root / path).exists():
                    block["path"] = str((root / path).resolve())
                    break


def load_campaign(source: Union[str, Path, Dict[str, Any]]) -> CampaignConfig:
    """
    Load and validate a campaign from a YAML file or an already-parsed mapping.

    Relative paths are tried as given, then next to the campaign file, then in
    the config directory.
    """
    if isinstance(source, dict):
        data, name, base = dict(source), "<mapping>", Path.cwd()
    else:
        path = config_manager._resolve(source)
        try:
            data = config_manager.reload(path)
        except (OSError, ValueError, yaml.YAMLError) as e:
            raise CampaignConfigError(str(source), str(e)) from e
        data, name, base = copy.deepcopy(data), str(path), path.resolve().parent
    _absolutize(data, base)

    try:
        cfg = CampaignConfig.model_validate(data)
    except ValidationError as e:
        raise CampaignConfigError(name, str(e)) from e
    logger.info(f"Campaign '{cfg.name}': {len(cfg.cells)} cells x {cfg.runs} runs, {cfg.generations} generations")
    return cfg


def build_topology(spec: TopologySpec) -> Topology:
    """Grid from rows/cols or graph from an edge-list file."""
    if spec.kind == "grid":
        return GridTopology(spec.rows, spec.cols)
    path = Path(spec.path)
    if not path.is_absolute() and not path.exists():
        path = config_manager.config_dir / path
    return load_topology(path)
