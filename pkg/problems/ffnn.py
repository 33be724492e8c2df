"""
Distributed presence/activity model.

Every sensor node evolves the weights of its own feed-forward classifier:
inputs (150 temperature + 150 humidity samples) -> hidden layer -> one output
per class, with bias units on the hidden and output layers. The predicted
class is the output with the highest activation (lowest index on ties).

Flat weight layout:
    hidden block: hidden x (inputs + 1), each row [w_1 .. w_inputs, bias]
    output block: outputs x (hidden + 1), each row [w_1 .. w_hidden, bias]

Fitness is training accuracy (maximized); test accuracy is tracked as the
held-out score.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, Sequence, Tuple

import numpy as np

from evolution.engine import Direction
from problems.base import Problem, ProblemError


WINDOW_FEATURES = 300
HIDDEN_UNITS = 100


class Task(str, Enum):
    PRESENCE = "presence"
    ACTIVITY = "activity"

    @property
    def outputs(self) -> int:
        return 2 if self is Task.PRESENCE else 4


def _sigmoid(z: np.ndarray) -> np.ndarray:
    # split form avoids overflow warnings for large |z|
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


ACTIVATIONS: Dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "sigmoid": _sigmoid,
    "tanh": np.tanh,
    "relu": lambda z: np.maximum(z, 0.0),
}


@dataclass(frozen=True)
class Window:
    """One classification instance: scaled sensor features and a class label."""
    features: np.ndarray
    label: int

    def __post_init__(self):
        features = np.asarray(self.features, dtype=np.float64).reshape(-1)
        features.setflags(write=False)
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "label", int(self.label))

    __hash__ = None


@dataclass(frozen=True)
class FfnnArchitecture:
    inputs: int = WINDOW_FEATURES
    hidden: int = HIDDEN_UNITS
    outputs: int = 2
    activation: str = "sigmoid"

    def __post_init__(self):
        if min(self.inputs, self.hidden, self.outputs) < 1:
            raise ProblemError("layer sizes must be positive")
        if self.activation not in ACTIVATIONS:
            raise ProblemError(f"unknown activation {self.activation!r}; use one of {sorted(ACTIVATIONS)}")

    @property
    def weight_count(self) -> int:
        return ffnn_weight_count(self.inputs, self.hidden, self.outputs)

    def unpack(self, weights: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        weights = np.asarray(weights, dtype=np.float64).reshape(-1)
        if weights.size != self.weight_count:
            raise ProblemError(
                f"weight vector has {weights.size} entries, architecture needs {self.weight_count}"
            )
        split = self.hidden * (self.inputs + 1)
        hidden = weights[:split].reshape(self.hidden, self.inputs + 1)
        output = weights[split:].reshape(self.outputs, self.hidden + 1)
        return hidden, output

    def activations(self, weights: np.ndarray, features: np.ndarray) -> np.ndarray:
        """Output-layer activations for a batch of feature rows (W x inputs)."""
        hidden_w, output_w = self.unpack(weights)
        x = np.atleast_2d(np.asarray(features, dtype=np.float64))
        if x.shape[1] != self.inputs:
            raise ProblemError(f"expected {self.inputs} features, got {x.shape[1]}")
        h = ACTIVATIONS[self.activation](x @ hidden_w[:, :-1].T + hidden_w[:, -1])
        return h @ output_w[:, :-1].T + output_w[:, -1]

    def predict(self, weights: np.ndarray, features: np.ndarray) -> np.ndarray:
        return self.activations(weights, features).argmax(axis=1)


def ffnn_weight_count(inputs: int, hidden: int, outputs: int) -> int:
    """(inputs + 1) * hidden + (hidden + 1) * outputs."""
    return (inputs + 1) * hidden + (hidden + 1) * outputs


def ffnn_forward(weights, w: Window, arch: FfnnArchitecture = FfnnArchitecture()) -> int:
    """Predicted class index for one window."""
    return int(arch.predict(getattr(weights, "values", weights), w.features)[0])


def ffnn_accuracy(weights, windows: Sequence[Window], arch: FfnnArchitecture = FfnnArchitecture()) -> float:
    """Fraction of windows whose predicted class equals the label."""
    if not windows:
        raise ProblemError("accuracy needs at least one window")
    features = np.stack([w.features for w in windows])
    labels = np.array([w.label for w in windows])
    predicted = arch.predict(getattr(weights, "values", weights), features)
    return float((predicted == labels).mean())


@dataclass(frozen=True)
class _NodeData:
    features: np.ndarray
    labels: np.ndarray

    @classmethod
    def from_windows(cls, windows: Sequence[Window]) -> "_NodeData":
        if not windows:
            raise ProblemError("every node needs at least one window")
        return cls(np.stack([w.features for w in windows]), np.array([w.label for w in windows]))

    def accuracy(self, arch: FfnnArchitecture, weights: np.ndarray) -> float:
        return float((arch.predict(weights, self.features) == self.labels).mean())


class FfnnProblem(Problem):
    """One classifier per sensor node; fitness is training accuracy."""

    direction = Direction.MAXIMIZE

    def __init__(
        self,
        task: Task,
        train: Sequence[Sequence[Window]],
        test: Sequence[Sequence[Window]],
        hidden: int = HIDDEN_UNITS,
        activation: str = "sigmoid",
        inputs: int = WINDOW_FEATURES,
    ):
        if len(train) != len(test) or not train:
            raise ProblemError("train and test windows are needed for every node")
        self.task = Task(task)
        self.name = f"ffnn_{self.task.value}"
        self.arch = FfnnArchitecture(inputs, hidden, self.task.outputs, activation)
        self._train = [_NodeData.from_windows(ws) for ws in train]
        self._test = [_NodeData.from_windows(ws) for ws in test]
        for data in self._train + self._test:
            if data.features.shape[1] != inputs:
                raise ProblemError(f"windows must have {inputs} features")
            if data.labels.min() < 0 or data.labels.max() >= self.task.outputs:
                raise ProblemError(f"labels must be in 0..{self.task.outputs - 1}")

    @property
    def node_count(self) -> int:
        return len(self._train)

    @property
    def genome_length(self) -> int:
        return self.arch.weight_count

    @property
    def bounds(self) -> Tuple[float, float]:
        return -1.0, 1.0

    def evaluate(self, node: int, values: np.ndarray) -> float:
        node = self._check_node(node)
        return self._train[node].accuracy(self.arch, self._check_length(values))

    def evaluate_population(self, genomes: np.ndarray) -> np.ndarray:
        return np.array([self._train[n].accuracy(self.arch, genomes[n]) for n in range(genomes.shape[0])])

    def holdout_population(self, genomes: np.ndarray, nodes: np.ndarray) -> np.ndarray:
        return np.array([self._test[int(n)].accuracy(self.arch, g) for g, n in zip(genomes, nodes)])

    def window_counts(self) -> Tuple[Tuple[int, int], ...]:
        return tuple((len(tr.labels), len(te.labels)) for tr, te in zip(self._train, self._test))
