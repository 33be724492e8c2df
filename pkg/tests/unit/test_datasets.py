"""
Unit tests for dataset ingestion: IDX images, sensor windows and synthetic data.
"""

import numpy as np
import pytest

from datasets.base import DatasetError
from datasets.idx import IDX3_MAGIC, IdxFormatError, IdxImageSet, downsample_frames, load_idx, write_idx
from datasets.sensors import (
    SensorSeries,
    SeriesTooShortError,
    SplitMode,
    SplitSpec,
    load_sensor_csv,
    majority_labels,
    make_windows,
    write_sensor_csv,
)
from datasets.synthetic import synth_digit_frames, synth_sensor_rooms
from problems.ffnn import Task


def _ramp_series(length=600, node=0):
    t = np.arange(length, dtype=np.float64)
    return SensorSeries(node, 20.0 + t / length, 40.0 - t / length, (t // 100 % 2).astype(int))


class TestIdx:
    """Test suite for the IDX3 container."""

    @pytest.fixture
    def pixels(self):
        pixels = np.zeros((3, 4, 5), dtype=np.uint8)
        pixels[0, 0, 0] = 255
        pixels[1] = 128
        pixels[2, 3, 4] = 7
        return pixels

    @pytest.mark.parametrize("name", ["images.idx", "images.idx.gz"])
    def test_write_then_load(self, tmp_path, pixels, name):
        images = load_idx(write_idx(tmp_path / name, pixels))
        assert (images.count, images.rows, images.cols) == (3, 4, 5)
        np.testing.assert_array_equal(images.pixels, pixels)

    def test_normalized_frames(self, pixels):
        frames = IdxImageSet(pixels).frames()
        assert frames[0, 0, 0] == 1.0
        assert frames[1, 0, 0] == pytest.approx(128 / 255)
        assert frames.max() <= 1.0 and frames.min() >= 0.0

    def test_frame_slice(self, pixels):
        frames = IdxImageSet(pixels).frames(count=1, start=2, normalize=False)
        assert frames.shape == (1, 4, 5)
        assert frames[0, 3, 4] == 7.0

    def test_frame_slice_out_of_range(self, pixels):
        with pytest.raises(DatasetError):
            IdxImageSet(pixels).frames(count=3, start=1)

    def test_bad_magic(self, tmp_path, pixels):
        path = write_idx(tmp_path / "x.idx", pixels)
        raw = bytearray(path.read_bytes())
        raw[3] = 0x01
        path.write_bytes(bytes(raw))
        with pytest.raises(IdxFormatError, match="magic"):
            load_idx(path)

    def test_truncated_header(self, tmp_path):
        path = tmp_path / "short.idx"
        path.write_bytes(IDX3_MAGIC.to_bytes(4, "big") + b"\x00\x00")
        with pytest.raises(IdxFormatError, match="header"):
            load_idx(path)

    def test_truncated_pixels(self, tmp_path, pixels):
        path = write_idx(tmp_path / "x.idx", pixels)
        path.write_bytes(path.read_bytes()[:-1])
        with pytest.raises(IdxFormatError, match="truncated pixel data"):
            load_idx(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(DatasetError):
            load_idx(tmp_path / "absent.idx")

    def test_downsample_block_mean(self):
        frames = np.arange(16, dtype=np.float64).reshape(1, 4, 4)
        small = downsample_frames(frames, 2)
        np.testing.assert_array_equal(small[0], [[2.5, 4.5], [10.5, 12.5]])

    def test_downsample_must_divide(self):
        with pytest.raises(DatasetError):
            downsample_frames(np.zeros((1, 5, 4)), 2)


class TestWindowing:
    """Test suite for sensor windows and the train/test split."""

    @pytest.mark.parametrize("length, expected", [(3000, 96), (150, 1), (179, 1), (180, 2), (149, 0)])
    def test_window_count(self, length, expected):
        assert SplitSpec().window_count(length) == expected

    def test_window_features_and_split_sizes(self):
        train, test = make_windows(_ramp_series(3000))
        assert len(train) + len(test) == 96
        assert len(train) == 77
        assert train[0].features.shape == (300,)

    def test_constant_series_scales_to_zero(self):
        series = SensorSeries(0, np.full(600, 21.0), np.full(600, 40.0), np.zeros(600, dtype=int))
        train, test = make_windows(series)
        assert all(np.all(w.features == 0.0) for w in train + test)

    def test_train_features_span_unit_range(self):
        train, test = make_windows(_ramp_series(), SplitSpec(mode=SplitMode.CHRONOLOGICAL))
        features = np.stack([w.features for w in train])
        assert features[:, :150].min() == 0.0 and features[:, :150].max() == 1.0
        # later test windows lie above the training range and are clamped
        assert max(w.features.max() for w in test) == 1.0

    def test_chronological_split_keeps_order(self):
        spec = SplitSpec(window_len=150, stride=30, mode=SplitMode.CHRONOLOGICAL)
        train, test = make_windows(_ramp_series(), spec)
        assert len(train) == 13 and len(test) == 3
        assert train[-1].features[0] <= test[0].features[0]

    def test_shuffle_is_seeded(self):
        series = _ramp_series()
        a, _ = make_windows(series, SplitSpec(split_seed=1))
        b, _ = make_windows(series, SplitSpec(split_seed=1))
        c, _ = make_windows(series, SplitSpec(split_seed=2))
        assert [w.label for w in a] == [w.label for w in b]
        assert not all(np.array_equal(x.features, y.features) for x, y in zip(a, c))

    def test_split_keeps_one_window_on_each_side(self):
        spec = SplitSpec(window_len=150, stride=30, train_fraction=0.99)
        train, test = make_windows(_ramp_series(180), spec)
        assert len(train) == 1 and len(test) == 1

    def test_series_too_short(self):
        with pytest.raises(SeriesTooShortError) as exc:
            make_windows(_ramp_series(100, node=4))
        assert exc.value.node == 4

    def test_majority_label_ties_go_low(self):
        np.testing.assert_array_equal(majority_labels(np.array([[1, 0, 0, 1], [2, 2, 1, 3]])), [0, 2])

    @pytest.mark.parametrize("kwargs", [{"window_len": 30, "stride": 30}, {"train_fraction": 1.0}])
    def test_invalid_split(self, kwargs):
        with pytest.raises(DatasetError):
            SplitSpec(**kwargs)

    def test_series_lengths_must_match(self):
        with pytest.raises(DatasetError):
            SensorSeries(0, np.zeros(5), np.zeros(4), np.zeros(5, dtype=int))


class TestSensorCsv:
    """Test suite for the sensor CSV layout."""

    def test_write_then_load(self, tmp_path):
        rooms = synth_sensor_rooms(3, nodes=2, samples=300, task=Task.ACTIVITY)
        loaded = load_sensor_csv(write_sensor_csv(rooms, tmp_path / "room.csv"), Task.ACTIVITY)
        assert [s.node for s in loaded] == [0, 1]
        np.testing.assert_array_equal(loaded[1].labels, rooms[1].labels)
        np.testing.assert_allclose(loaded[0].temperature, rooms[0].temperature, atol=1e-6)

    def test_node_numbering_checked(self, tmp_path):
        path = tmp_path / "gap.csv"
        path.write_text("node,timestamp,temperature,humidity,label\n0,0,20,40,0\n2,0,20,40,0\n")
        with pytest.raises(DatasetError, match="0..N-1"):
            load_sensor_csv(path, Task.PRESENCE)

    def test_label_range_checked(self, tmp_path):
        path = tmp_path / "labels.csv"
        path.write_text("node,timestamp,temperature,humidity,label\n0,0,20,40,3\n")
        with pytest.raises(DatasetError):
            load_sensor_csv(path, Task.PRESENCE)

    def test_missing_columns(self, tmp_path):
        path = tmp_path / "cols.csv"
        path.write_text("node,temperature\n0,20\n")
        with pytest.raises(DatasetError, match="missing columns"):
            load_sensor_csv(path, Task.PRESENCE)


class TestSynthetic:
    """Test suite for the synthetic generators."""

    def test_rooms_are_deterministic(self):
        a = synth_sensor_rooms(5, 3, 500, Task.PRESENCE)
        b = synth_sensor_rooms(5, 3, 500, Task.PRESENCE)
        for x, y in zip(a, b):
            np.testing.assert_array_equal(x.temperature, y.temperature)

    def test_rooms_share_labels(self):
        rooms = synth_sensor_rooms(0, 3, 1000, Task.ACTIVITY)
        assert len(rooms) == 3 and len(rooms[0]) == 1000
        np.testing.assert_array_equal(rooms[0].labels, rooms[2].labels)
        assert rooms[0].labels.max() <= 3

    def test_presence_raises_temperature(self):
        room = synth_sensor_rooms(1, 1, 5000, Task.PRESENCE)[0]
        occupied = room.temperature[room.labels == 1].mean()
        empty = room.temperature[room.labels == 0].mean()
        assert occupied > empty

    def test_room_arguments_checked(self):
        with pytest.raises(DatasetError):
            synth_sensor_rooms(0, 0, 500, Task.PRESENCE)
        with pytest.raises(DatasetError):
            synth_sensor_rooms(0, 2, 100, Task.PRESENCE)

    def test_digit_frames(self):
        frames = synth_digit_frames(0, 4, 28, 28)
        assert frames.shape == (4, 28, 28)
        assert frames.min() == 0.0 and frames.max() <= 1.0
        assert (frames > 0.5).any()
        np.testing.assert_array_equal(frames, synth_digit_frames(0, 4, 28, 28))
