"""
Sensor time series and windowing for the presence/activity task.

Each node records temperature and humidity at a fixed rate together with a
ground-truth label (presence 0/1, activity 0..3). The series of one node is
cut into overlapping windows, every window becomes one classification
instance with 2 * window_len features (temperatures, then humidities).
"""

from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import List, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from numpy.lib.stride_tricks import sliding_window_view
from loguru import logger

from datasets.base import DatasetError, resolve_data_path
from evolution.rng import DATA_STREAM, AgentRng
from problems.ffnn import Task, Window


CSV_COLUMNS = ["node", "timestamp", "temperature", "humidity", "label"]


class SeriesTooShortError(DatasetError):
    """The series is shorter than one window."""

    def __init__(self, node: int, length: int, window_len: int):
        self.node = node
        self.length = length
        self.window_len = window_len
        super().__init__(f"Node {node}: series of {length} samples is shorter than a {window_len}-sample window")


class SplitMode(str, Enum):
    SHUFFLE = "shuffle"
    CHRONOLOGICAL = "chronological"


@dataclass(frozen=True)
class SensorSeries:
    """Aligned temperature, humidity and label streams of one node."""
    node: int
    temperature: np.ndarray
    humidity: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        temperature = np.asarray(self.temperature, dtype=np.float64).reshape(-1)
        humidity = np.asarray(self.humidity, dtype=np.float64).reshape(-1)
        labels = np.asarray(self.labels).reshape(-1)
        if not len(temperature) == len(humidity) == len(labels):
            raise DatasetError(
                f"Node {self.node}: temperature/humidity/label lengths differ "
                f"({len(temperature)}, {len(humidity)}, {len(labels)})"
            )
        if labels.size and (labels.min() < 0 or not np.array_equal(labels, np.round(labels))):
            raise DatasetError(f"Node {self.node}: labels must be non-negative integers")
        object.__setattr__(self, "temperature", temperature)
        object.__setattr__(self, "humidity", humidity)
        object.__setattr__(self, "labels", labels.astype(np.int64))

    __hash__ = None

    def __len__(self) -> int:
        return int(self.labels.size)


@dataclass(frozen=True)
class SplitSpec:
    """Windowing and train/test split parameters."""
    window_len: int = 150
    stride: int = 30
    train_fraction: float = 0.8
    split_seed: int = 0
    mode: SplitMode = SplitMode.SHUFFLE

    def __post_init__(self):
        if not self.window_len > self.stride > 0:
            raise DatasetError(f"need window_len > stride > 0, got {self.window_len}, {self.stride}")
        if not 0.0 < self.train_fraction < 1.0:
            raise DatasetError(f"train_fraction must be in (0, 1), got {self.train_fraction}")
        object.__setattr__(self, "mode", SplitMode(self.mode))

    def window_count(self, length: int) -> int:
        if length < self.window_len:
            return 0
        return (length - self.window_len) // self.stride + 1


def majority_labels(label_windows: np.ndarray) -> np.ndarray:
    """Most frequent label per row; ties go to the lowest label."""
    classes = int(label_windows.max()) + 1
    counts = (label_windows[..., None] == np.arange(classes)).sum(axis=1)
    return counts.argmax(axis=1)


def _minmax(values: np.ndarray, lo: float, hi: float) -> np.ndarray:
    if hi <= lo:
        return np.zeros_like(values)
    return (values - lo) / (hi - lo)


def _train_size(windows: int, fraction: float) -> int:
    if windows < 2:
        return windows
    return int(min(max(np.floor(fraction * windows + 0.5), 1), windows - 1))


def make_windows(series: SensorSeries, spec: SplitSpec = SplitSpec()) -> Tuple[List[Window], List[Window]]:
    """
    Cut a node's series into windows and split them into train and test.

    Scaling is min-max per modality, fitted on the training windows only;
    test features falling outside the training range are clamped to [0, 1].
    """
    length = len(series)
    if length < spec.window_len:
        raise SeriesTooShortError(series.node, length, spec.window_len)

    temp = sliding_window_view(series.temperature, spec.window_len)[::spec.stride]
    hum = sliding_window_view(series.humidity, spec.window_len)[::spec.stride]
    labels = majority_labels(sliding_window_view(series.labels, spec.window_len)[::spec.stride])
    count = temp.shape[0]

    if spec.mode is SplitMode.SHUFFLE:
        order = AgentRng(spec.split_seed, (DATA_STREAM, series.node)).permutation(count)
    else:
        order = np.arange(count)
    n_train = _train_size(count, spec.train_fraction)
    train_idx = np.sort(order[:n_train])
    test_idx = np.sort(order[n_train:])

    t_lo, t_hi = temp[train_idx].min(), temp[train_idx].max()
    h_lo, h_hi = hum[train_idx].min(), hum[train_idx].max()
    features = np.hstack([_minmax(temp, t_lo, t_hi), _minmax(hum, h_lo, h_hi)])

    train = [Window(features[i], labels[i]) for i in train_idx]
    test = [Window(np.clip(features[i], 0.0, 1.0), labels[i]) for i in test_idx]
    return train, test


def load_sensor_csv(path: Union[str, Path], task: Task) -> List[SensorSeries]:
    """
    Read node,timestamp,temperature,humidity,label rows into one series per node.

    Nodes must be numbered 0..N-1; rows are ordered by timestamp within a node.
    """
    path = resolve_data_path(path)
    task = Task(task)
    try:
        frame = pd.read_csv(path)
    except (OSError, pd.errors.ParserError) as e:
        raise DatasetError(f"cannot read sensor CSV {path}: {e}") from e

    missing = [c for c in CSV_COLUMNS if c not in frame.columns]
    if missing:
        raise DatasetError(f"{path}: missing columns {missing}")
    if frame[CSV_COLUMNS].isna().any().any():
        raise DatasetError(f"{path}: empty cells in sensor data")

    nodes = sorted(int(n) for n in frame["node"].unique())
    if nodes != list(range(len(nodes))):
        raise DatasetError(f"{path}: nodes must be numbered 0..N-1, found {nodes}")
    labels = frame["label"].astype(int)
    if labels.min() < 0 or labels.max() >= task.outputs:
        raise DatasetError(f"{path}: {task.value} labels must be in 0..{task.outputs - 1}")

    series = []
    for node, rows in frame.sort_values(["node", "timestamp"], kind="stable").groupby("node", sort=True):
        series.append(SensorSeries(
            node=int(node),
            temperature=rows["temperature"].to_numpy(),
            humidity=rows["humidity"].to_numpy(),
            labels=rows["label"].to_numpy(dtype=np.int64),
        ))
    logger.info(f"Loaded {len(series)} sensor series from {path}")
    return series


def write_sensor_csv(series: Sequence[SensorSeries], path: Union[str, Path]) -> Path:
    """Write series in the CSV layout read by load_sensor_csv; timestamps are sample indices."""
    path = Path(path)
    frames = [
        pd.DataFrame({
            "node": s.node,
            "timestamp": np.arange(len(s)),
            "temperature": s.temperature,
            "humidity": s.humidity,
            "label": s.labels,
        })
        for s in series
    ]
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.concat(frames, ignore_index=True)[CSV_COLUMNS].to_csv(
        path, index=False, float_format="%.6f", lineterminator="\n"
    )
    logger.info(f"Wrote {len(series)} sensor series to {path}")
    return path
