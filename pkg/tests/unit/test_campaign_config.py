"""
Unit tests for campaign files: schema validation, sweep expansion and the
problem factory.
"""

import pytest

from config.campaign import (
    CampaignConfigError,
    CellSpec,
    SweepSpec,
    build_topology,
    expand_sweep,
    load_campaign,
)
from evolution.engine import CrossoverMode, Direction, Variant
from network.topology import GraphTopology, GridTopology
from problems.base import ProblemError
from problems.factory import build_problem


SHIPPED = ["imitation_desk", "imitation_sweep", "illumination_single", "illumination_vector", "sensors_presence"]


class TestSweep:
    """Test suite for sweep expansion."""

    def test_ignored_parameters_collapse(self):
        cells = expand_sweep(SweepSpec(cp=[0.2, 0.5], cr=[0.05, 0.5], mr=[0.001]))
        per_variant = {v: sum(c.variant is v for c in cells) for v in Variant}
        assert per_variant == {
            Variant.HILL_CLIMBING: 1,
            Variant.COPY_BEST: 2,
            Variant.COPY_RAND: 2,
            Variant.XOVER_BEST: 4,
            Variant.XOVER_RAND: 4,
        }

    def test_labels(self, tiny_campaign):
        assert [c.label for c in tiny_campaign.cells] == [
            "HillClimbing_cp0_cr0_mr0.05",
            "CopyBest_cp0.5_cr0_mr0.05",
            "XoverRand_cp0.5_cr0.5_mr0.05",
        ]

    def test_empty_list_rejected(self, campaign_data):
        with pytest.raises(CampaignConfigError):
            load_campaign(campaign_data(sweep={"cp": []}))

    def test_explicit_cells_come_first(self, campaign_data):
        cfg = load_campaign(campaign_data(cells=[{"variant": "CopyRand", "cp": 1.0, "cr": 0.0, "mr": 0.05}]))
        assert cfg.cells[0].label == "CopyRand_cp1_cr0_mr0.05"
        assert len(cfg.cells) == 4

    def test_cell_params(self):
        params = CellSpec(variant="XoverBest", cp=0.2, cr=0.05, mr=0.01).params
        assert (params.cp, params.cr, params.mr) == (0.2, 0.05, 0.01)


class TestCampaignValidation:
    """Test suite for schema checks."""

    def test_defaults(self, tiny_campaign):
        assert tiny_campaign.direction is Direction.MINIMIZE
        assert tiny_campaign.collective == "mean"
        assert tiny_campaign.stats.alpha == 0.05
        assert tiny_campaign.cell_key(2) == 2

    def test_common_seeding(self, campaign_data):
        cfg = load_campaign(campaign_data(seeding="common"))
        assert {cfg.cell_key(i) for i in range(3)} == {0}

    @pytest.mark.parametrize("overrides", [
        {"unknown_key": 1},
        {"runs": 0},
        {"generations": -1},
        {"snapshot_generations": [21]},
        {"snapshot_time": [-1]},
        {"stats": {"alpha": 0.2}},
        {"topology": {"kind": "graph", "path": "topologies/room_b.txt"}},
        {"topology": {"kind": "grid", "rows": 4}},
        {"sweep": None},
        {"collective": "median"},
        {"crossover": "arithmetic"},
        {"crossover": "arithmetic", "problem": {"kind": "illumination_vector"}},
    ])
    def test_invalid_campaigns(self, campaign_data, overrides):
        with pytest.raises(CampaignConfigError):
            load_campaign(campaign_data(**overrides))

    def test_arithmetic_crossover_on_single_gene_problem(self, campaign_data):
        cfg = load_campaign(campaign_data(crossover="arithmetic", problem={"kind": "illumination_single"}))
        assert cfg.crossover is CrossoverMode.ARITHMETIC
        one_frame = {"kind": "imitation", "images": {"source": "synthetic", "count": 1, "rows": 4, "cols": 4}}
        assert load_campaign(campaign_data(crossover="arithmetic", problem=one_frame)).problem.single_gene

    def test_missing_file(self, tmp_path):
        with pytest.raises(CampaignConfigError):
            load_campaign(tmp_path / "nope.yaml")

    def test_resolved_has_cells_only(self, tiny_campaign):
        resolved = tiny_campaign.resolved()
        assert "sweep" not in resolved
        assert len(resolved["cells"]) == 3
        assert load_campaign(resolved) == tiny_campaign

    def test_yaml_file(self, tmp_path):
        path = tmp_path / "c.yaml"
        path.write_text(
            "name: from_file\n"
            "problem: {kind: illumination_vector}\n"
            "topology: {kind: grid, rows: 2, cols: 3}\n"
            "cells:\n  - {variant: HillClimbing, mr: 0.05}\n"
            "generations: 5\n"
        )
        cfg = load_campaign(path)
        assert cfg.name == "from_file"
        assert cfg.cells[0].variant is Variant.HILL_CLIMBING

    @pytest.mark.parametrize("name", SHIPPED)
    def test_shipped_campaigns_load(self, config_dir, name):
        cfg = load_campaign(config_dir / "campaigns" / f"{name}.yaml")
        assert cfg.name == name
        assert cfg.cells

    def test_shipped_sweep_size(self, config_dir):
        cfg = load_campaign(config_dir / "campaigns" / "imitation_sweep.yaml")
        assert len(cfg.cells) == 1 + 3 + 3 + 9 + 9

    def test_sensor_campaign_maximizes(self, config_dir):
        cfg = load_campaign(config_dir / "campaigns" / "sensors_presence.yaml")
        assert cfg.direction is Direction.MAXIMIZE
        assert isinstance(build_topology(cfg.topology), GraphTopology)


class TestProblemFactory:
    """Test suite for building problems from campaigns."""

    def test_imitation(self, tiny_campaign):
        topology = build_topology(tiny_campaign.topology)
        problem = build_problem(tiny_campaign, topology)
        assert isinstance(topology, GridTopology)
        assert problem.grid_shape == (4, 4)
        assert problem.genome_length == 3

    def test_grid_shape_must_match(self, campaign_data):
        cfg = load_campaign(campaign_data(topology={"kind": "grid", "rows": 5, "cols": 4}))
        with pytest.raises(ProblemError):
            build_problem(cfg, build_topology(cfg.topology))

    def test_illumination(self, campaign_data):
        cfg = load_campaign(campaign_data(problem={"kind": "illumination_single"}))
        problem = build_problem(cfg, build_topology(cfg.topology))
        assert problem.name == "illumination_single"
        assert problem.node_count == 16

    def test_ffnn_on_room(self, campaign_data):
        cfg = load_campaign(campaign_data(
            problem={
                "kind": "ffnn",
                "task": "presence",
                "sensors": {"source": "synthetic", "samples": 600},
                "hidden": 5,
            },
            topology={"kind": "graph", "path": "topologies/room_b.txt"},
        ))
        problem = build_problem(cfg, build_topology(cfg.topology))
        assert problem.node_count == 3
        assert problem.genome_length == 301 * 5 + 6 * 2
        assert problem.window_counts() == ((13, 3),) * 3

    def test_ffnn_series_count_must_match(self, campaign_data):
        cfg = load_campaign(campaign_data(
            problem={"kind": "ffnn", "sensors": {"source": "synthetic", "samples": 600, "nodes": 2}, "hidden": 5},
            topology={"kind": "graph", "path": "topologies/room_b.txt"},
        ))
        with pytest.raises(ProblemError):
            build_problem(cfg, build_topology(cfg.topology))
