"""
netee command line interface.

Commands:
    netee run --config CAMPAIGN      run a campaign file (or CAMPAIGN positionally)
    netee sweep --config CAMPAIGN    run a campaign over a cp/cr/mr grid
    netee render trends RESULTS      mean/std fitness trends per cell
    netee render truth CAMPAIGN      ground-truth frames of a grid problem
    netee stats --in RESULTS         Wilcoxon matrix and CD diagram data
    netee analyze distmap CAMPAIGN.. neighbor-distance maps of optimal behaviors
    netee analyze exchange           expected genes exchanged by crossover
    netee synth sensors|digits       synthetic input data
"""

import functools
import time
from pathlib import Path
from typing import Any, Dict, List, Optional

import click
import numpy as np
import pandas as pd
from loguru import logger

from analysis.distances import joint_normalize, neighbor_distance_map
from analysis.exchange import exchange_table
from config.campaign import CampaignConfig, CampaignConfigError, load_campaign
from config.settings import settings
from datasets.base import DatasetError
from datasets.idx import write_idx
from datasets.sensors import write_sensor_csv
from datasets.synthetic import synth_digit_frames, synth_sensor_rooms
from evolution.genome import GenomeError
from monitoring.logger import log_error, log_performance, setup_logging
from monitoring.metrics import start_metrics_server
from network.topology import TopologyError
from problems.base import ProblemError
from problems.ffnn import Task
from render.pgm import write_pgm
from render.trends import summarize_trajectories, write_trend_summary
from runner.campaign import prepare, run_campaign
from runner.outputs import RESOLVED_CONFIG
from stats.nonparametric import StatsError, friedman_nemenyi, pairwise_wilcoxon
from stats.reporting import best_per_variant, load_final_scores, variants_of, write_report


DOMAIN_ERRORS = (
    CampaignConfigError,
    DatasetError,
    GenomeError,
    ProblemError,
    StatsError,
    TopologyError,
    FileNotFoundError,
)


def _domain_errors(func):
    """Report domain failures as a logged error and a non-zero exit."""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except DOMAIN_ERRORS as e:
            log_error("cli", e, {"command": func.__name__})
            raise click.ClickException(str(e)) from e
    return wrapper


def _floats(text: Optional[str]) -> Optional[List[float]]:
    if text is None:
        return None
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated numbers, got {text!r}")


def _with_overrides(cfg: CampaignConfig, **overrides: Any) -> CampaignConfig:
    updates = {k: v for k, v in overrides.items() if v is not None}
    if not updates:
        return cfg
    return load_campaign({**cfg.resolved(), **updates})


@click.group()
@click.option("--log-level", default=None, help="Override NETEE_LOG_LEVEL.")
def cli(log_level: Optional[str]):
    """Distributed Embodied Evolution simulator."""
    if log_level:
        settings.logging.level = log_level.upper()
    setup_logging(settings)
    if settings.metrics.enabled:
        start_metrics_server(settings.metrics.port)


def _campaign_source(campaign: Optional[Path], config: Optional[Path]) -> Path:
    if campaign and config and campaign != config:
        raise click.UsageError("Give the campaign either as CAMPAIGN or with --config, not both.")
    source = config or campaign
    if source is None:
        raise click.UsageError("Missing campaign: pass CAMPAIGN or --config FILE.")
    return source


def _execute(cfg: CampaignConfig, out: Optional[Path], threads: Optional[int], progress: bool) -> None:
    out = out or Path("results") / cfg.name
    logger.info(f"Writing results of {cfg.name} to {out}")
    results = run_campaign(cfg, out, threads=threads, progress=progress)
    for cell, runs in zip(cfg.cells, results):
        finals = np.array([r.final for r in runs])
        click.echo(f"{cell.label:40s} final {finals.mean():.6g} +- {finals.std():.3g}")
    click.echo(f"Results in {out}")


@cli.command()
@click.argument("campaign", required=False, type=click.Path(path_type=Path))
@click.option("--config", type=click.Path(path_type=Path), default=None, help="Campaign file (same as CAMPAIGN).")
@click.option("--out", type=click.Path(path_type=Path), default=None, help="Output directory.")
@click.option("--threads", type=click.IntRange(min=1), default=None)
@click.option("--runs", type=click.IntRange(min=1), default=None)
@click.option("--generations", type=click.IntRange(min=0), default=None)
@click.option("--seed", "master_seed", type=click.IntRange(min=0), default=None)
@click.option("--collective", type=click.Choice(["mean", "sum"]), default=None, help="Aggregate of agent fitness.")
@click.option("--progress/--no-progress", default=True)
@_domain_errors
def run(campaign, config, out, threads, runs, generations, master_seed, collective, progress):
    """Run every cell of CAMPAIGN."""
    cfg = _with_overrides(load_campaign(_campaign_source(campaign, config)), runs=runs, generations=generations,
                          master_seed=master_seed, collective=collective)
    _execute(cfg, out, threads, progress)


@cli.command()
@click.argument("campaign", required=False, type=click.Path(path_type=Path))
@click.option("--config", type=click.Path(path_type=Path), default=None, help="Campaign file (same as CAMPAIGN).")
@click.option("--variants", default=None, help="Comma-separated variant names.")
@click.option("--cp", default=None, help="Comma-separated crossover probabilities.")
@click.option("--cr", default=None, help="Comma-separated per-gene crossover rates.")
@click.option("--mr", default=None, help="Comma-separated mutation rates.")
@click.option("--out", type=click.Path(path_type=Path), default=None)
@click.option("--threads", type=click.IntRange(min=1), default=None)
@click.option("--runs", type=click.IntRange(min=1), default=None)
@click.option("--generations", type=click.IntRange(min=0), default=None)
@click.option("--collective", type=click.Choice(["mean", "sum"]), default=None, help="Aggregate of agent fitness.")
@click.option("--progress/--no-progress", default=True)
@_domain_errors
def sweep(campaign, config, variants, cp, cr, mr, out, threads, runs, generations, collective, progress):
    """Run CAMPAIGN over the product of the given parameter lists."""
    cfg = load_campaign(_campaign_source(campaign, config))
    grid: Dict[str, Any] = {
        "variants": variants.split(",") if variants else sorted({c.variant.value for c in cfg.cells}),
        "cp": _floats(cp) or sorted({c.cp for c in cfg.cells if c.variant.uses_cp}) or [0.5],
        "cr": _floats(cr) or sorted({c.cr for c in cfg.cells if c.variant.uses_cr}) or [0.5],
        "mr": _floats(mr) or sorted({c.mr for c in cfg.cells}),
    }
    data = {**cfg.resolved(), "cells": [], "sweep": grid}
    cfg = _with_overrides(load_campaign(data), runs=runs, generations=generations, collective=collective)
    _execute(cfg, out, threads, progress)


@cli.group()
def render():
    """Trend summaries and ground-truth images."""


@render.command("trends")
@click.argument("results", type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--out", type=click.Path(path_type=Path), default=None, help="CSV path (default RESULTS/trends.csv).")
@click.option("--best-only", is_flag=True, help="Keep each variant's best-ranked setting only.")
@_domain_errors
def render_trends(results, out, best_only):
    """Mean and std of the fitness trajectories in RESULTS."""
    labels = None
    if best_only:
        cd = friedman_nemenyi(load_final_scores(results))
        labels = best_per_variant(cd, variants_of(results)).values()
    write_trend_summary(summarize_trajectories(results, labels), out or results / "trends.csv")


@render.command("truth")
@click.argument("campaign", type=click.Path(path_type=Path))
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), default=Path("truth"))
@click.option("--time", "times", type=int, multiple=True, default=(0,), show_default=True)
@_domain_errors
def render_truth(campaign, out, times):
    """Ground-truth frames of a grid problem."""
    cfg = load_campaign(campaign)
    _, problem = prepare(cfg)
    truth = problem.truth_genomes()
    if truth is None or problem.grid_shape is None:
        raise ProblemError(f"{problem.name} has no ground-truth frames")
    for t in times:
        path = write_pgm(out / f"truth_{cfg.name}_t{t}.pgm", problem.phenotype_frame(truth, t))
        click.echo(str(path))


@cli.command()
@click.option("--in", "results", required=True, type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--alpha", type=click.Choice(["0.05", "0.1"]), default=None)
@click.option("--blocks", type=click.Choice(["runs", "agents"]), default=None)
@click.option("--metric", type=click.Choice(["auto", "collective_fitness", "test_accuracy"]), default=None)
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), default=None)
@_domain_errors
def stats(results, alpha, blocks, metric, out):
    """Pairwise Wilcoxon matrix and Nemenyi CD data for a results directory."""
    defaults = {"alpha": 0.05, "blocks": "runs", "metric": "auto"}
    if (results / RESOLVED_CONFIG).exists():
        defaults.update(load_campaign(results / RESOLVED_CONFIG).stats.model_dump())
    alpha = float(alpha) if alpha else defaults["alpha"]
    matrix = load_final_scores(results, metric or defaults["metric"], blocks or defaults["blocks"])

    started = time.perf_counter()
    pairwise = pairwise_wilcoxon(matrix, alpha)
    cd = friedman_nemenyi(matrix, alpha)
    log_performance("stats", (time.perf_counter() - started) * 1000, k=matrix.k, blocks=matrix.blocks)
    best = best_per_variant(cd, variants_of(results))
    write_report(out or results, pairwise, cd, best)
    for label, rank in cd.ranking():
        click.echo(f"{rank:6.3f}  {label}")
    click.echo(f"CD = {cd.cd:.4f} (alpha {alpha:g}, {cd.blocks} blocks)")


@cli.group()
def analyze():
    """Diagnostics of problems and operators."""


@analyze.command("distmap")
@click.argument("campaigns", nargs=-1, required=True, type=click.Path(path_type=Path))
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), default=Path("distmaps"))
@_domain_errors
def analyze_distmap(campaigns, out):
    """Neighbor-distance maps of the optimal behaviors, normalized jointly."""
    names, maps = [], []
    for campaign in campaigns:
        cfg = load_campaign(campaign)
        topology, problem = prepare(cfg)
        truth = problem.truth_genomes()
        if truth is None:
            raise ProblemError(f"{problem.name} has no optimal genotypes")
        names.append(cfg.name)
        maps.append(neighbor_distance_map(truth, topology))

    out.mkdir(parents=True, exist_ok=True)
    for name, raw, scaled in zip(names, maps, joint_normalize(maps)):
        write_pgm(out / f"distmap_{name}.pgm", scaled)
        pd.DataFrame(raw).to_csv(out / f"distmap_{name}.csv", index=False, header=False,
                                 float_format="%.17g", lineterminator="\n")
        click.echo(f"{name}: max {raw.max():.6g}, mean {raw.mean():.6g}")


@analyze.command("exchange")
@click.option("--cp", default="0.2,0.5,1.0", show_default=True)
@click.option("--cr", default="0.05,0.2,0.5", show_default=True)
@click.option("--length", type=click.IntRange(min=1), required=True, help="Genotype length.")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None)
@_domain_errors
def analyze_exchange(cp, cr, length, out):
    """Expected number of exchanged genes per crossover and per generation."""
    table = exchange_table(_floats(cp), _floats(cr), length)
    if out:
        table.to_csv(out, index=False, lineterminator="\n")
    click.echo(table.to_string(index=False))


@cli.group()
def synth():
    """Synthetic input data."""


@synth.command("sensors")
@click.option("--nodes", type=click.IntRange(min=1), required=True)
@click.option("--samples", type=click.IntRange(min=150), default=3000, show_default=True)
@click.option("--task", type=click.Choice([t.value for t in Task]), default="presence", show_default=True)
@click.option("--seed", type=click.IntRange(min=0), default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), required=True)
@_domain_errors
def synth_sensors(nodes, samples, task, seed, out):
    """Write a synthetic room as node,timestamp,temperature,humidity,label CSV."""
    write_sensor_csv(synth_sensor_rooms(seed, nodes, samples, Task(task)), out)
    click.echo(str(out))


@synth.command("digits")
@click.option("--count", type=click.IntRange(min=1), default=100, show_default=True)
@click.option("--rows", type=click.IntRange(min=1), default=28, show_default=True)
@click.option("--cols", type=click.IntRange(min=1), default=28, show_default=True)
@click.option("--seed", type=click.IntRange(min=0), default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), required=True)
@_domain_errors
def synth_digits(count, rows, cols, seed, out):
    """Write stroke-like frames as an IDX3 image file (.gz compresses)."""
    frames = synth_digit_frames(seed, count, rows, cols)
    write_idx(out, np.rint(frames * 255).astype(np.uint8))
    click.echo(str(out))


def main():
    cli()


if __name__ == "__main__":
    main()
