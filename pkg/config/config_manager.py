"""
Configuration Manager
Handles YAML loading for campaign files with cached, thread-safe access.
"""

import threading
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml
from loguru import logger


class ConfigManager:
    """
    Configuration Manager for YAML files.

    Features:
    - Load YAML configuration files (absolute paths or relative to config_dir)
    - Nested key access with dot notation
    - Per-file cache guarded by a lock
    """

    def __init__(self, config_dir: Union[str, Path] = 'config'):
        self.config_dir = Path(config_dir)
        self.configs: Dict[str, Dict[str, Any]] = {}
        self._lock = threading.Lock()

        logger.debug(f"ConfigManager initialized with directory: {self.config_dir}")

    def _resolve(self, filename: Union[str, Path]) -> Path:
        path = Path(filename)
        if path.is_absolute() or path.exists():
            return path
        return self.config_dir / path

    def load_config(self, filename: Union[str, Path]) -> Dict[str, Any]:
        """
        Load a YAML configuration file.

        Args:
            filename: Path of the file, absolute or relative to config_dir

        Returns:
            Dictionary with configuration data (empty dict for an empty file)
        """
        file_path = self._resolve(filename)

        try:
            with open(file_path, 'r', encoding='utf-8') as f:
                config = yaml.safe_load(f) or {}
        except FileNotFoundError:
            logger.error(f"Configuration file not found: {file_path}")
            raise
        except yaml.YAMLError as e:
            logger.error(f"Error parsing YAML file {file_path}: {e}")
            raise

        if not isinstance(config, dict):
            raise ValueError(f"Top level of {file_path} must be a mapping")

        with self._lock:
            self.configs[str(filename)] = config

        logger.info(f"Loaded configuration from {file_path}")
        return config

    def get(self, key: str, filename: Union[str, Path], default: Any = None) -> Any:
        """
        Get configuration value using dot notation.

        Examples:
            >>> config_manager.get('problem.kind', 'campaigns/imitation_desk.yaml')
            >>> config_manager.get('topology.rows', 'campaigns/imitation_desk.yaml')
        """
        if str(filename) not in self.configs:
            try:
                self.load_config(filename)
            except (OSError, ValueError, yaml.YAMLError):
                return default

        with self._lock:
            value: Optional[Any] = self.configs.get(str(filename), {})

        for k in key.split('.'):
            if isinstance(value, dict):
                value = value.get(k)
                if value is None:
                    return default
            else:
                return default

        return value

    def get_all(self, filename: Union[str, Path]) -> Dict[str, Any]:
        """Get a copy of an entire configuration file."""
        if str(filename) not in self.configs:
            self.load_config(filename)

        with self._lock:
            return dict(self.configs.get(str(filename), {}))

    def reload(self, filename: Union[str, Path]) -> Dict[str, Any]:
        """Drop the cached copy and read the file again."""
        logger.info(f"Reloading configuration: {filename}")
        with self._lock:
            self.configs.pop(str(filename), None)
        return self.load_config(filename)


# Global instance
config_manager = ConfigManager(Path(__file__).resolve().parent)
