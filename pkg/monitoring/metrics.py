"""
Prometheus metrics definitions for netee.

Defines:
- Evolution metrics (generations, accepted offspring)
- Run metrics (completed runs, run duration)
- Campaign metrics (cells per campaign)

Metrics live in a dedicated registry. Runs executed in worker processes are
recorded by the parent process once their results come back.
"""

from typing import Dict, Optional

from loguru import logger
from prometheus_client import (
    CollectorRegistry,
    Counter,
    Gauge,
    Histogram,
    Info,
    start_http_server,
)


# Create custom registry
registry = CollectorRegistry()

# ============================================================================
# EVOLUTION METRICS
# ============================================================================

generations_total = Counter(
    'netee_generations_total',
    'Total number of synchronous generations executed',
    ['problem', 'variant'],
    registry=registry
)

offspring_accepted_total = Counter(
    'netee_offspring_accepted_total',
    'Total number of offspring that replaced their parent',
    ['problem', 'variant'],
    registry=registry
)

# ============================================================================
# RUN METRICS
# ============================================================================

runs_completed_total = Counter(
    'netee_runs_completed_total',
    'Total number of completed independent runs',
    ['problem', 'variant'],
    registry=registry
)

run_duration = Histogram(
    'netee_run_duration_seconds',
    'Wall-clock duration of one independent run',
    ['problem'],
    buckets=[0.1, 0.5, 1.0, 5.0, 15.0, 60.0, 300.0, 1800.0],
    registry=registry
)

# ============================================================================
# CAMPAIGN METRICS
# ============================================================================

campaign_cells = Gauge(
    'netee_campaign_cells',
    'Number of parameter cells in the current campaign',
    ['campaign'],
    registry=registry
)

app_info = Info(
    'netee',
    'Simulator information',
    registry=registry
)

# ============================================================================
# HELPER FUNCTIONS
# ============================================================================

def increment_counter(metric: Counter, labels: Dict[str, str], amount: float = 1.0):
    """Safely increment a counter with labels."""
    try:
        metric.labels(**labels).inc(amount)
    except Exception:
        pass  # Ignore metric errors


def set_gauge(metric: Gauge, value: float, labels: Optional[Dict[str, str]] = None):
    """Safely set a gauge value."""
    try:
        if labels:
            metric.labels(**labels).set(value)
        else:
            metric.set(value)
    except Exception:
        pass


def start_metrics_server(port: int = 9100):
    """Start the Prometheus metrics HTTP server."""
    start_http_server(port, registry=registry)
    logger.info(f"Metrics server started on port {port}")


app_info.info({'version': '0.1.0'})
