"""Shared errors and path handling for dataset loaders."""

from pathlib import Path
from typing import Union

from config.settings import settings


class DatasetError(ValueError):
    """Malformed or unusable input data."""


def resolve_data_path(path: Union[str, Path]) -> Path:
    """
    Resolve a dataset path.

    Absolute paths and paths that exist relative to the working directory are
    used as given; anything else is looked up under NETEE_DATA_DIR.
    """
    candidate = Path(path).expanduser()
    if candidate.is_absolute() or candidate.exists():
        return candidate
    return settings.runner.data_dir / candidate
