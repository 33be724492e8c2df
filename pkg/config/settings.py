"""
Centralized environment settings for netee.

Values come from environment variables (optionally a `.env` file in the
working directory). Campaign parameters live in YAML files, not here.
"""

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv


# Base directory
BASE_DIR = Path(__file__).resolve().parent.parent

load_dotenv()


@dataclass
class LoggingConfig:
    """Loguru sink configuration."""
    level: str = "INFO"
    format: str = "text"
    log_dir: Optional[Path] = None


@dataclass
class RunnerConfig:
    """Campaign execution defaults."""
    threads: int = 1
    progress_interval: int = 0
    data_dir: Path = BASE_DIR / "data"


@dataclass
class MetricsConfig:
    """Prometheus exporter configuration."""
    enabled: bool = False
    port: int = 9100


def _env_flag(name: str, default: str) -> bool:
    return os.getenv(name, default).lower() in ("1", "true", "yes")


class Settings:
    """Application settings loaded from environment variables."""

    def __init__(self):
        log_dir = os.getenv("NETEE_LOG_DIR")
        self.logging = LoggingConfig(
            level=os.getenv("NETEE_LOG_LEVEL", "INFO").upper(),
            format=os.getenv("NETEE_LOG_FORMAT", "text").lower(),
            log_dir=Path(log_dir) if log_dir else None,
        )

        self.runner = RunnerConfig(
            threads=max(1, int(os.getenv("NETEE_THREADS", "1"))),
            progress_interval=max(0, int(os.getenv("NETEE_PROGRESS_INTERVAL", "0"))),
            data_dir=Path(os.getenv("NETEE_DATA_DIR", str(BASE_DIR / "data"))),
        )

        self.metrics = MetricsConfig(
            enabled=_env_flag("NETEE_METRICS_ENABLED", "false"),
            port=int(os.getenv("NETEE_METRICS_PORT", "9100")),
        )

        # Environment
        self.environment = os.getenv("NETEE_ENVIRONMENT", "development")

    def is_production(self) -> bool:
        """Check if running in production environment."""
        return self.environment == "production"


# Global settings instance
settings = Settings()
