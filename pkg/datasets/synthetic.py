"""
Synthetic data generators used when the real datasets are not available.

synth_sensor_rooms
    One room with `nodes` sensors sharing a label stream (occupancy or
    activity). Each label has a characteristic heat and moisture load; the
    room responds with thermal inertia (exponential smoothing) plus a slow
    shared drift. A node sees the room signal scaled by exp(-0.35 * n), so
    nodes with close indices see similar signals. On top of that every node
    has its own offset, a local AR(1) drift and white measurement noise.

synth_digit_frames
    Stroke-like grayscale frames: a few blurred quadratic Bezier curves on a
    black background, roughly the look of handwritten digits.
"""

from typing import List

import numpy as np
from scipy.signal import lfilter

from datasets.base import DatasetError
from datasets.sensors import SensorSeries
from evolution.rng import DATA_STREAM, AgentRng
from problems.ffnn import Task


# Per-label room loads (temperature in C, relative humidity in %).
# Activity labels: 0 reading, 1 standing, 2 walking, 3 working on a PC.
_LOADS = {
    Task.PRESENCE: (np.array([0.0, 0.8]), np.array([0.0, 2.5])),
    Task.ACTIVITY: (np.array([0.3, 0.5, 0.9, 0.6]), np.array([1.0, 1.8, 3.0, 1.4])),
}

_INERTIA = 0.05
_COUPLING_DECAY = 0.35
_MIN_SEGMENT, _MAX_SEGMENT = 60, 400


def _ar1(rng: AgentRng, phi: float, sigma: float, n: int) -> np.ndarray:
    return lfilter([1.0], [1.0, -phi], sigma * rng.standard_normal(n))


def _label_stream(rng: AgentRng, classes: int, samples: int) -> np.ndarray:
    labels = np.empty(samples, dtype=np.int64)
    pos = 0
    label = int(rng.integers(0, classes))
    while pos < samples:
        length = int(rng.integers(_MIN_SEGMENT, _MAX_SEGMENT + 1))
        labels[pos:pos + length] = label
        pos += length
        # always switch to a different label
        label = (label + int(rng.integers(1, classes))) % classes
    return labels


def synth_sensor_rooms(seed: int, nodes: int, samples: int, task: Task) -> List[SensorSeries]:
    """Deterministic synthetic temperature/humidity series for one room."""
    task = Task(task)
    if nodes < 1:
        raise DatasetError(f"need at least one node, got {nodes}")
    if samples < 150:
        raise DatasetError(f"need at least 150 samples, got {samples}")

    room = AgentRng(seed, (DATA_STREAM, 0))
    labels = _label_stream(room, task.outputs, samples)
    temp_load, hum_load = _LOADS[task]
    smooth = ([_INERTIA], [1.0, -(1.0 - _INERTIA)])
    room_temp = lfilter(*smooth, temp_load[labels]) + _ar1(room, 0.98, 0.02, samples)
    room_hum = lfilter(*smooth, hum_load[labels]) + _ar1(room, 0.98, 0.1, samples)

    series = []
    for n in range(nodes):
        rng = AgentRng(seed, (DATA_STREAM, 1, n))
        coupling = np.exp(-_COUPLING_DECAY * n)
        temperature = (
            21.0 + rng.standard_normal() * 1.0
            + coupling * room_temp
            + _ar1(rng, 0.9, 0.05, samples)
            + 0.03 * rng.standard_normal(samples)
        )
        humidity = (
            40.0 + rng.standard_normal() * 3.0
            + coupling * room_hum
            + _ar1(rng, 0.9, 0.2, samples)
            + 0.1 * rng.standard_normal(samples)
        )
        series.append(SensorSeries(n, temperature, humidity, labels.copy()))
    return series


def synth_digit_frames(seed: int, count: int, rows: int = 28, cols: int = 28) -> np.ndarray:
    """count x rows x cols frames in [0, 1] with a zero background."""
    if count < 1 or rows < 1 or cols < 1:
        raise DatasetError(f"invalid frame stack {count}x{rows}x{cols}")
    rng = AgentRng(seed, (DATA_STREAM, 2))
    yy, xx = np.mgrid[0:rows, 0:cols]
    grid = np.stack([yy.ravel(), xx.ravel()], axis=1).astype(np.float64)
    sigma = 1.1 * max(rows, cols) / 28.0
    s = np.linspace(0.0, 1.0, 40)[:, None]
    size = np.array([rows - 1, cols - 1], dtype=np.float64)

    frames = np.zeros((count, rows, cols))
    for f in range(count):
        points = []
        for _ in range(int(rng.integers(2, 5))):
            p0, p1, p2 = (rng.uniform(0.2, 0.8, 2) * size for _ in range(3))
            points.append((1 - s) ** 2 * p0 + 2 * (1 - s) * s * p1 + s ** 2 * p2)
        curve = np.vstack(points)
        d2 = ((grid[:, None, :] - curve[None, :, :]) ** 2).sum(axis=2).min(axis=1)
        intensity = np.exp(-d2 / (2 * sigma ** 2))
        intensity[intensity < 0.05] = 0.0
        frames[f] = intensity.reshape(rows, cols)
    return np.clip(frames, 0.0, 1.0)
