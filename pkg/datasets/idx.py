"""
IDX3 image files (the MNIST container format).

Layout (big-endian):
    uint32 magic = 0x00000803
    uint32 count, uint32 rows, uint32 cols
    count * rows * cols unsigned bytes, row-major

Files ending in .gz are decompressed transparently.
"""

import gzip
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np
from loguru import logger

from datasets.base import DatasetError, resolve_data_path


IDX3_MAGIC = 0x00000803
_HEADER = np.dtype(">u4")


class IdxFormatError(DatasetError):
    """The file is not a well-formed IDX3 image file."""

    def __init__(self, path, reason: str):
        self.path = str(path)
        self.reason = reason
        super().__init__(f"{self.path}: {reason}")


@dataclass(frozen=True)
class IdxImageSet:
    """count x rows x cols grayscale images stored as raw bytes."""
    pixels: np.ndarray

    def __post_init__(self):
        if self.pixels.dtype != np.uint8 or self.pixels.ndim != 3:
            raise DatasetError("pixels must be a count x rows x cols uint8 array")
        if min(self.pixels.shape) < 1:
            raise DatasetError(f"empty image set {self.pixels.shape}")

    __hash__ = None

    @property
    def count(self) -> int:
        return self.pixels.shape[0]

    @property
    def rows(self) -> int:
        return self.pixels.shape[1]

    @property
    def cols(self) -> int:
        return self.pixels.shape[2]

    def frames(self, count: Optional[int] = None, normalize: bool = True, start: int = 0) -> np.ndarray:
        """First `count` images from `start` as floats; normalized frames are pixel / 255."""
        stop = self.count if count is None else start + int(count)
        if start < 0 or stop > self.count or stop <= start:
            raise DatasetError(f"cannot take images {start}..{stop - 1} from a set of {self.count}")
        frames = self.pixels[start:stop].astype(np.float64)
        return frames / 255.0 if normalize else frames


def downsample_frames(frames: np.ndarray, factor: int) -> np.ndarray:
    """Block-mean downsampling of a T x rows x cols stack by an integer factor."""
    factor = int(factor)
    t_count, rows, cols = frames.shape
    if factor < 1 or rows % factor or cols % factor:
        raise DatasetError(f"factor {factor} does not divide {rows}x{cols} frames")
    if factor == 1:
        return np.array(frames, dtype=np.float64)
    blocks = frames.reshape(t_count, rows // factor, factor, cols // factor, factor)
    return blocks.mean(axis=(2, 4))


def _read_bytes(path: Path) -> bytes:
    if path.suffix == ".gz":
        with gzip.open(path, "rb") as handle:
            return handle.read()
    return path.read_bytes()


def load_idx(path: Union[str, Path]) -> IdxImageSet:
    """Read an IDX3 image file."""
    path = resolve_data_path(path)
    try:
        raw = _read_bytes(path)
    except OSError as e:
        raise DatasetError(f"cannot read {path}: {e}") from e

    if len(raw) < 16:
        raise IdxFormatError(path, f"truncated header ({len(raw)} bytes)")
    magic, count, rows, cols = (int(v) for v in np.frombuffer(raw, dtype=_HEADER, count=4))
    if magic != IDX3_MAGIC:
        raise IdxFormatError(path, f"bad magic 0x{magic:08x}, expected 0x{IDX3_MAGIC:08x}")
    if min(count, rows, cols) < 1:
        raise IdxFormatError(path, f"invalid dimensions {count}x{rows}x{cols}")

    expected = count * rows * cols
    body = len(raw) - 16
    if body < expected:
        raise IdxFormatError(path, f"truncated pixel data: {body} of {expected} bytes")

    pixels = np.frombuffer(raw, dtype=np.uint8, count=expected, offset=16).reshape(count, rows, cols)
    logger.debug(f"Loaded {count} images of {rows}x{cols} from {path}")
    return IdxImageSet(pixels.copy())


def write_idx(path: Union[str, Path], pixels: np.ndarray) -> Path:
    """Write a count x rows x cols uint8 array as an IDX3 file (gzip if .gz)."""
    path = Path(path)
    pixels = np.asarray(pixels)
    if pixels.ndim != 3 or pixels.dtype != np.uint8:
        raise DatasetError("pixels must be a count x rows x cols uint8 array")
    header = np.array([IDX3_MAGIC, *pixels.shape], dtype=_HEADER).tobytes()
    payload = header + np.ascontiguousarray(pixels).tobytes()
    path.parent.mkdir(parents=True, exist_ok=True)
    if path.suffix == ".gz":
        with gzip.open(path, "wb") as handle:
            handle.write(payload)
    else:
        path.write_bytes(payload)
    return path
