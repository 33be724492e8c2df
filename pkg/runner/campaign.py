"""
Campaign execution.

A campaign is a grid of (cell, run) jobs. Every job is fully determined by
the configuration and its (cell, run) pair, so jobs can run in any order on
any number of worker processes; results are put back in (cell, run) order
and written to files that do not depend on scheduling.
"""

import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
from loguru import logger
from tqdm import tqdm

from config.campaign import CampaignConfig, build_topology
from config.settings import settings
from evolution.engine import initialize_population
from monitoring.logger import log_error, log_generation_progress, log_run_completed, log_run_started
from monitoring.metrics import (
    campaign_cells,
    generations_total,
    increment_counter,
    offspring_accepted_total,
    run_duration,
    runs_completed_total,
    set_gauge,
)
from network.topology import Topology
from problems.base import Problem
from problems.factory import build_problem
from render.pgm import write_pgm
from runner.outputs import (
    agents_path,
    snapshot_path,
    trajectory_path,
    write_agents,
    write_manifest,
    write_resolved_config,
    write_trajectory,
)
from runner.snapshots import snapshot_phenotype


@dataclass
class RunResult:
    """Outcome of one independent run of one cell."""
    cell: int
    run: int
    label: str
    collective: np.ndarray
    test_accuracy: Optional[np.ndarray]
    final_fitness: np.ndarray
    final_holdout: Optional[np.ndarray]
    snapshots: Dict[Tuple[int, int], np.ndarray] = field(default_factory=dict)
    accepted: int = 0
    duration_s: float = 0.0

    @property
    def generations(self) -> int:
        return len(self.collective) - 1

    @property
    def initial(self) -> float:
        return float(self.collective[0])

    @property
    def final(self) -> float:
        return float(self.collective[-1])


# Built problems per process; worker processes fill their own copy.
_PREPARED: Dict[str, Tuple[Topology, Problem]] = {}


def prepare(cfg: CampaignConfig) -> Tuple[Topology, Problem]:
    """Topology and problem of a campaign, built once per process."""
    key = cfg.model_dump_json(include={"problem", "topology"})
    if key not in _PREPARED:
        topology = build_topology(cfg.topology)
        _PREPARED[key] = (topology, build_problem(cfg, topology))
    return _PREPARED[key]


def run_single(
    cfg: CampaignConfig,
    cell_index: int,
    run: int,
    topology: Optional[Topology] = None,
    problem: Optional[Problem] = None,
) -> RunResult:
    """Evolve one cell for one run and record its trajectory."""
    if topology is None or problem is None:
        topology, problem = prepare(cfg)
    cell = cfg.cells[cell_index]
    params = cell.params
    generations = cfg.generations
    log_run_started(cfg.name, cell_index, run, cell.label, generations)
    start = time.perf_counter()

    population = initialize_population(problem, cfg.master_seed, cfg.cell_key(cell_index), run)
    collective = np.empty(generations + 1)
    collective[0] = population.collective(cfg.collective)
    holdout = None
    if population.holdout is not None:
        holdout = np.empty(generations + 1)
        holdout[0] = population.collective_holdout(cfg.collective)

    wanted = set(cfg.snapshot_generations) if problem.grid_shape is not None else set()
    snapshots: Dict[Tuple[int, int], np.ndarray] = {}

    def take_snapshots(g: int) -> None:
        if g in wanted:
            for t in cfg.snapshot_time:
                snapshots[(g, t)] = snapshot_phenotype(population, problem, t)

    take_snapshots(0)
    interval = settings.runner.progress_interval
    accepted = 0
    for g in range(1, generations + 1):
        accepted += population.step(topology, problem, cell.variant, params, problem.direction, cfg.crossover)
        collective[g] = population.collective(cfg.collective)
        if holdout is not None:
            holdout[g] = population.collective_holdout(cfg.collective)
        take_snapshots(g)
        if interval and g % interval == 0:
            log_generation_progress(cell.label, run, g, collective[g])

    return RunResult(
        cell=cell_index,
        run=run,
        label=cell.label,
        collective=collective,
        test_accuracy=holdout,
        final_fitness=population.fitness.copy(),
        final_holdout=None if population.holdout is None else population.holdout.copy(),
        snapshots=snapshots,
        accepted=accepted,
        duration_s=time.perf_counter() - start,
    )


def write_run_outputs(out_dir: Path, cfg: CampaignConfig, result: RunResult) -> None:
    write_trajectory(trajectory_path(out_dir, result.cell, result.run), result.collective, result.test_accuracy)
    if cfg.record_agent_fitness:
        write_agents(agents_path(out_dir, result.cell, result.run), result.final_fitness, result.final_holdout)
    several = len(cfg.snapshot_time) > 1
    for (g, t), frame in sorted(result.snapshots.items()):
        write_pgm(snapshot_path(out_dir, result.cell, result.run, g, t if several else None), frame)


def _record(cfg: CampaignConfig, problem: Problem, result: RunResult) -> None:
    labels = {"problem": problem.name, "variant": cfg.cells[result.cell].variant.value}
    increment_counter(generations_total, labels, result.generations)
    increment_counter(offspring_accepted_total, labels, result.accepted)
    increment_counter(runs_completed_total, labels)
    run_duration.labels(problem=problem.name).observe(result.duration_s)
    log_run_completed(cfg.name, result.cell, result.run, result.label, result.initial, result.final, result.duration_s)


def run_campaign(
    cfg: CampaignConfig,
    out_dir: Optional[Union[str, Path]] = None,
    threads: Optional[int] = None,
    progress: bool = True,
) -> List[List[RunResult]]:
    """
    Run every (cell, run) job of a campaign.

    Args:
        cfg: validated campaign
        out_dir: directory for result files (nothing is written when None)
        threads: worker processes (default: campaign setting, then NETEE_THREADS)
        progress: show a tqdm progress bar

    Returns:
        results[cell][run]
    """
    threads = threads or cfg.thread_count
    topology, problem = prepare(cfg)
    out = Path(out_dir) if out_dir is not None else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        write_resolved_config(out, cfg)
        write_manifest(out, cfg, problem.name)
    if cfg.snapshot_generations and problem.grid_shape is None:
        logger.warning(f"{problem.name} is not a grid problem; snapshots are skipped")

    set_gauge(campaign_cells, len(cfg.cells), {"campaign": cfg.name})
    jobs = [(c, r) for c in range(len(cfg.cells)) for r in range(cfg.runs)]
    results: List[List[Optional[RunResult]]] = [[None] * cfg.runs for _ in cfg.cells]
    logger.info(
        f"Campaign '{cfg.name}' on {problem.name}: {len(jobs)} runs, "
        f"{topology.node_count} agents, {threads} worker(s)"
    )

    started = time.perf_counter()
    with tqdm(total=len(jobs), desc=cfg.name, unit="run", disable=not progress) as bar:

        def collect(result: RunResult) -> None:
            results[result.cell][result.run] = result
            _record(cfg, problem, result)
            if out is not None:
                write_run_outputs(out, cfg, result)
            bar.update(1)

        if threads == 1:
            for c, r in jobs:
                collect(run_single(cfg, c, r, topology, problem))
        else:
            with ProcessPoolExecutor(max_workers=threads) as pool:
                futures = {pool.submit(run_single, cfg, c, r): (c, r) for c, r in jobs}
                for future in as_completed(futures):
                    try:
                        collect(future.result())
                    except Exception as e:
                        c, r = futures[future]
                        log_error("runner", e, {"cell": c, "run": r, "campaign": cfg.name})
                        raise

    logger.info(f"Campaign '{cfg.name}' finished in {time.perf_counter() - started:.1f}s")
    return results
