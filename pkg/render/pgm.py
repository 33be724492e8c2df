"""
Binary PGM (P5, 8-bit) grayscale images.

Frame values are clipped to [0, 1] and stored as round(255 * v).
"""

from pathlib import Path
from typing import Union

import numpy as np


class PgmFormatError(ValueError):
    """Not a binary 8-bit PGM file."""


def to_gray(frame: np.ndarray) -> np.ndarray:
    """[0, 1] floats to uint8 gray levels (round half to even)."""
    frame = np.asarray(frame, dtype=np.float64)
    if frame.ndim != 2:
        raise PgmFormatError(f"frame must be 2-D, got shape {frame.shape}")
    return np.rint(255.0 * np.clip(frame, 0.0, 1.0)).astype(np.uint8)


def write_pgm(path: Union[str, Path], frame: np.ndarray) -> Path:
    path = Path(path)
    gray = to_gray(frame)
    rows, cols = gray.shape
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(f"P5\n{cols} {rows}\n255\n".encode("ascii") + gray.tobytes())
    return path


def _header_tokens(data: bytes, count: int):
    """First `count` whitespace-separated header tokens (skipping # comments) and the body offset."""
    tokens, pos = [], 0
    while len(tokens) < count:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        if start == pos:
            raise PgmFormatError("truncated header")
        tokens.append(data[start:pos].decode("ascii"))
    # exactly one whitespace byte separates the header from the raster
    return tokens, pos + 1


def read_pgm(path: Union[str, Path]) -> np.ndarray:
    """Frame in [0, 1] (gray / 255) from a P5 file with maxval 255."""
    data = Path(path).read_bytes()
    tokens, offset = _header_tokens(data, 4)
    magic, cols, rows, maxval = tokens
    if magic != "P5":
        raise PgmFormatError(f"{path}: expected P5, got {magic}")
    if maxval != "255":
        raise PgmFormatError(f"{path}: only 8-bit files are supported (maxval {maxval})")
    cols, rows = int(cols), int(rows)
    raster = np.frombuffer(data, dtype=np.uint8, offset=offset)
    if raster.size < rows * cols:
        raise PgmFormatError(f"{path}: truncated raster")
    return raster[:rows * cols].reshape(rows, cols).astype(np.float64) / 255.0
