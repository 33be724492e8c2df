"""
Campaign runner.

This package contains:
- Parallel, deterministic execution of (cell, run) jobs
- Result files (trajectories, manifests, snapshots)
- The `netee` command line interface
"""

from runner.campaign import RunResult, run_campaign, run_single
from runner.snapshots import snapshot_phenotype

__all__ = ['RunResult', 'run_campaign', 'run_single', 'snapshot_phenotype']
