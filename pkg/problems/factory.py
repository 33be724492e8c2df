"""Build the problem instance a campaign describes."""

import numpy as np
from loguru import logger

from config.campaign import CampaignConfig, ImagesSpec, ProblemKind, ProblemSpec
from datasets.idx import downsample_frames, load_idx
from datasets.sensors import SplitSpec, load_sensor_csv, make_windows
from datasets.synthetic import synth_digit_frames, synth_sensor_rooms
from network.topology import GridTopology, Topology
from problems.base import Problem, ProblemError
from problems.ffnn import FfnnProblem, Task
from problems.illumination import IlluminationMode, IlluminationProblem
from problems.imitation import ImitationProblem


def load_frames(images: ImagesSpec) -> np.ndarray:
    """T x rows x cols frames in [0, 1] from an IDX file or the synthetic generator."""
    if images.source == "idx":
        frames = load_idx(images.path).frames(images.count, start=images.start)
    else:
        frames = synth_digit_frames(images.seed, images.count, images.rows, images.cols)
    return downsample_frames(frames, images.downsample)


def _build_ffnn(spec: ProblemSpec, topology: Topology) -> FfnnProblem:
    task = Task(spec.task)
    sensors = spec.sensors
    if sensors.source == "csv":
        series = load_sensor_csv(sensors.path, task)
    else:
        series = synth_sensor_rooms(sensors.seed, sensors.nodes or topology.node_count, sensors.samples, task)
    if len(series) != topology.node_count:
        raise ProblemError(f"{len(series)} sensor series for a topology with {topology.node_count} nodes")

    split = SplitSpec(
        window_len=spec.split.window_len,
        stride=spec.split.stride,
        train_fraction=spec.split.train_fraction,
        split_seed=spec.split.seed,
        mode=spec.split.mode,
    )
    train, test = zip(*(make_windows(s, split) for s in series))
    problem = FfnnProblem(task, train, test, hidden=spec.hidden, activation=spec.activation,
                          inputs=2 * split.window_len)
    logger.debug(f"{problem.name}: windows per node (train, test) {problem.window_counts()}")
    return problem


def build_problem(cfg: CampaignConfig, topology: Topology) -> Problem:
    """Instantiate the campaign's problem and check it fits the topology."""
    spec = cfg.problem
    if spec.kind is ProblemKind.FFNN:
        return _build_ffnn(spec, topology)

    if not isinstance(topology, GridTopology):
        raise ProblemError(f"{spec.kind.value} needs a grid topology")
    if spec.kind is ProblemKind.IMITATION:
        problem: Problem = ImitationProblem(load_frames(spec.images), spec.tile)
    else:
        mode = IlluminationMode.SINGLE if spec.kind is ProblemKind.ILLUMINATION_SINGLE else IlluminationMode.VECTOR
        problem = IlluminationProblem(topology.rows, topology.cols, mode)

    if problem.grid_shape != topology.shape:
        raise ProblemError(
            f"{problem.name} needs a {problem.grid_shape[0]}x{problem.grid_shape[1]} agent grid, "
            f"topology is {topology.rows}x{topology.cols}"
        )
    return problem
