"""
Pipeline observability.

- Debug-level event/metric/exception lines through the standard logger
- In-memory metric store so the CLI can attach stage timings to reports
- ``track_stage`` decorator for the engine's pipeline stages
"""

import os
import time
import logging
import threading
from collections import defaultdict
from functools import wraps
from typing import Any, Dict, List

logger = logging.getLogger(__name__)


class PipelineObservability:
    """
    Centralized observability manager.
    """

    def __init__(self):
        self.service_version = os.getenv("SERVICE_VERSION", "1.0.0")
        self._lock = threading.Lock()
        self._metrics: Dict[str, List[float]] = defaultdict(list)
        self._events: Dict[str, int] = defaultdict(int)
        self._exceptions: Dict[str, int] = defaultdict(int)

    # -------------------------------------------------
    # Lightweight logging helpers
    # -------------------------------------------------
    def track_event(self, name: str, props: dict | None = None):
        logger.debug(f"event={name} props={props or {}}")
        with self._lock:
            self._events[name] += 1

    def track_metric(self, name: str, value: float, props: dict | None = None):
        logger.debug(f"metric={name} value={value} props={props or {}}")
        with self._lock:
            self._metrics[name].append(float(value))

    def track_exception(self, exc: Exception, props: dict | None = None):
        logger.debug(f"exception={type(exc).__name__} props={props or {}}")
        with self._lock:
            self._exceptions[type(exc).__name__] += 1

    # -------------------------------------------------
    # Introspection
    # -------------------------------------------------
    def snapshot(self) -> Dict[str, Any]:
        """Aggregated view: count and total per metric, plus counters."""
        with self._lock:
            return {
                "metrics": {
                    name: {"count": len(values), "total": round(sum(values), 3)}
                    for name, values in sorted(self._metrics.items())
                },
                "events": dict(sorted(self._events.items())),
                "exceptions": dict(sorted(self._exceptions.items())),
            }

    def get_status(self) -> dict:
        snap = self.snapshot()
        return {
            "service_version": self.service_version,
            "metrics_tracked": len(snap["metrics"]),
            "events_tracked": sum(snap["events"].values()),
            "exceptions_tracked": sum(snap["exceptions"].values()),
        }

    def reset(self) -> None:
        with self._lock:
            self._metrics.clear()
            self._events.clear()
            self._exceptions.clear()


# -------------------------------------------------
# Global singleton
# -------------------------------------------------
observability = PipelineObservability()


# -------------------------------------------------
# Decorators
# -------------------------------------------------
def track_stage(stage_name: str):
    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            start = time.perf_counter()
            try:
                result = func(*args, **kwargs)
                observability.track_metric(
                    f"{stage_name}_duration_ms",
                    (time.perf_counter() - start) * 1000,
                )
                return result
            except Exception as e:
                observability.track_exception(e, {"stage": stage_name})
                raise
        return wrapper
    return decorator
