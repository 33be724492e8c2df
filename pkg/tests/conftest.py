"""
Pytest configuration and shared fixtures
"""

from pathlib import Path

import numpy as np
import pytest

from config.campaign import load_campaign
from network.topology import GridTopology
from problems.imitation import ImitationProblem


CONFIG_DIR = Path(__file__).resolve().parent.parent / "config"


@pytest.fixture(scope="session")
def config_dir() -> Path:
    """Directory holding shipped campaigns and topologies"""
    return CONFIG_DIR


@pytest.fixture
def small_grid():
    """A 4x5 Moore grid"""
    return GridTopology(4, 5)


@pytest.fixture
def gradient_frames():
    """Three 4x5 frames with distinct, deterministic pixel values in [0, 1]"""
    base = np.arange(20, dtype=np.float64).reshape(4, 5) / 19.0
    return np.stack([base, 1.0 - base, np.full((4, 5), 0.25)])


@pytest.fixture
def imitation_problem(gradient_frames):
    """Imitation problem on the 4x5 grid (one pixel per agent)"""
    return ImitationProblem(gradient_frames)


@pytest.fixture
def campaign_data():
    """
    Factory for small campaign mappings.

    Keyword arguments override top-level keys of a 4x4 imitation campaign
    with synthetic 8x8 frames downsampled by 2.
    """
    def make(**overrides):
        data = {
            "name": "tiny",
            "problem": {
                "kind": "imitation",
                "images": {"source": "synthetic", "count": 3, "rows": 8, "cols": 8, "downsample": 2},
            },
            "topology": {"kind": "grid", "rows": 4, "cols": 4},
            "sweep": {
                "variants": ["HillClimbing", "CopyBest", "XoverRand"],
                "cp": [0.5],
                "cr": [0.5],
                "mr": [0.05],
            },
            "runs": 3,
            "generations": 20,
            "master_seed": 7,
        }
        data.update(overrides)
        return data

    return make


@pytest.fixture
def tiny_campaign(campaign_data):
    """Validated campaign built from the default campaign_data mapping"""
    return load_campaign(campaign_data())


# Pytest hooks
def pytest_collection_modifyitems(config, items):
    """Add markers based on test location"""
    for item in items:
        if "integration" in str(item.fspath):
            item.add_marker(pytest.mark.integration)
        elif "unit" in str(item.fspath):
            item.add_marker(pytest.mark.unit)

        # Add slow marker for tests with long timeouts
        marker = item.get_closest_marker("timeout")
        if marker and marker.args and marker.args[0] > 60:
            item.add_marker(pytest.mark.slow)


def pytest_report_header(config):
    """Add custom header to pytest report"""
    return [
        "netee test suite",
        "=" * 50,
    ]
