"""
Dataset ingestion.

This package contains:
- IDX3 image loading (MNIST format)
- Sensor time series loading, windowing and scaling
- Synthetic generators standing in for data that is not bundled
"""

from datasets.base import DatasetError
from datasets.idx import IdxFormatError, IdxImageSet, load_idx
from datasets.sensors import SensorSeries, SeriesTooShortError, SplitSpec, make_windows
from datasets.synthetic import synth_digit_frames, synth_sensor_rooms

__all__ = [
    'DatasetError',
    'IdxFormatError',
    'IdxImageSet',
    'SensorSeries',
    'SeriesTooShortError',
    'SplitSpec',
    'load_idx',
    'make_windows',
    'synth_digit_frames',
    'synth_sensor_rooms',
]
