"""
Structured logging configuration using loguru.

Provides consistent logging across all components with:
- Human-readable console output in development
- JSON output otherwise
- Optional rotating log files
- Event helpers binding campaign context (cell, run, variant)
"""

import sys
from typing import Optional

from loguru import logger

from config.settings import Settings, settings as default_settings


_FILE_FORMAT = "{time:YYYY-MM-DD HH:mm:ss.SSS} | {level: <8} | {name}:{function}:{line} | {message}"


def setup_logging(settings: Optional[Settings] = None) -> None:
    """
    Configure loguru sinks.

    Console output is colorized text when running in development with the
    text format, JSON lines otherwise. File sinks are only added when a log
    directory is configured.
    """
    settings = settings or default_settings
    log_cfg = settings.logging

    # Remove default handler
    logger.remove()

    if log_cfg.format == "json" or settings.is_production():
        logger.add(
            sys.stderr,
            format="{message}",
            level=log_cfg.level,
            serialize=True,
        )
    else:
        logger.add(
            sys.stderr,
            format="<green>{time:HH:mm:ss.SSS}</green> | "
                   "<level>{level: <8}</level> | "
                   "<cyan>{name}</cyan>:<cyan>{function}</cyan> | "
                   "<level>{message}</level>",
            level=log_cfg.level,
            colorize=True,
            backtrace=True,
            diagnose=False,
        )

    if log_cfg.log_dir is not None:
        log_cfg.log_dir.mkdir(parents=True, exist_ok=True)
        logger.add(
            log_cfg.log_dir / "netee_{time:YYYY-MM-DD}.log",
            rotation="1 day",
            retention="30 days",
            compression="gz",
            format=_FILE_FORMAT,
            level="DEBUG",
            enqueue=True,
        )
        logger.add(
            log_cfg.log_dir / "error_{time:YYYY-MM-DD}.log",
            rotation="1 day",
            retention="30 days",
            compression="gz",
            format=_FILE_FORMAT,
            level="ERROR",
            enqueue=True,
        )

    logger.debug(f"Logging configured: level={log_cfg.level}, format={log_cfg.format}")


def log_run_started(campaign: str, cell: int, run: int, label: str, generations: int):
    """Log the start of one (cell, run) evolution."""
    logger.bind(
        event_type="run_started",
        campaign=campaign,
        cell=cell,
        run=run,
        label=label,
        generations=generations,
    ).debug(f"Run started: {label} run={run}")


def log_run_completed(
    campaign: str,
    cell: int,
    run: int,
    label: str,
    initial: float,
    final: float,
    duration_s: float,
):
    """Log a finished run with its collective fitness endpoints."""
    logger.bind(
        event_type="run_completed",
        campaign=campaign,
        cell=cell,
        run=run,
        label=label,
        initial_fitness=initial,
        final_fitness=final,
        duration_s=duration_s,
    ).info(f"Run completed: {label} run={run} F: {initial:.6g} -> {final:.6g} ({duration_s:.1f}s)")


def log_generation_progress(label: str, run: int, generation: int, collective: float):
    """Log periodic progress inside a run."""
    logger.bind(
        event_type="generation_progress",
        label=label,
        run=run,
        generation=generation,
        collective_fitness=collective,
    ).debug(f"{label} run={run} g={generation} F={collective:.6g}")


def log_error(component: str, error: Exception, context: Optional[dict] = None):
    """Log error with full context."""
    logger.bind(
        event_type="error",
        component=component,
        error_type=type(error).__name__,
        **(context or {})
    ).error(f"Error in {component}: {error}")


def log_performance(operation: str, duration_ms: float, **kwargs):
    """Log performance metrics."""
    logger.bind(
        event_type="performance",
        operation=operation,
        duration_ms=duration_ms,
        **kwargs
    ).info(f"Performance: {operation} took {duration_ms:.2f}ms")
