"""
Performance Metrics
===================
Wall-clock timing of norms, solvers, probes and sweeps. Aggregates per
operation are embedded in run manifests when timings are enabled.
"""

import threading
import time
from dataclasses import dataclass
from functools import wraps
from typing import Callable, Dict, Optional

from core.logger import get_logger

SLOW_OPERATION_MS = 5000.0


@dataclass
class OperationStats:
    """Running aggregate for one operation name."""

    count: int = 0
    total_ms: float = 0.0
    min_ms: float = float("inf")
    max_ms: float = 0.0
    errors: int = 0

    def add(self, duration_ms: float, success: bool) -> None:
        self.count += 1
        self.total_ms += duration_ms
        self.min_ms = min(self.min_ms, duration_ms)
        self.max_ms = max(self.max_ms, duration_ms)
        if not success:
            self.errors += 1

    def summary(self) -> Dict[str, float]:
        if self.count == 0:
            return {"count": 0, "avg_ms": 0.0, "min_ms": 0.0, "max_ms": 0.0, "error_rate": 0.0}
        return {
            "count": self.count,
            "avg_ms": self.total_ms / self.count,
            "min_ms": self.min_ms,
            "max_ms": self.max_ms,
            "error_rate": self.errors / self.count,
        }


class MetricsCollector:
    """
    Collects operation timings.

    Thread-safe; probe points record from worker threads.
    """

    def __init__(self):
        self.logger = get_logger()
        self._lock = threading.Lock()
        self._stats: Dict[str, OperationStats] = {}

    def record(
        self,
        operation: str,
        duration_ms: float,
        success: bool = True,
        error: Optional[str] = None,
    ) -> None:
        """
        Record one timing.

        Args:
            operation: Operation name (e.g. "modulation_norm", "inflation_probe")
            duration_ms: Duration in milliseconds
            success: Whether the operation returned normally
            error: Exception text when it did not
        """
        with self._lock:
            self._stats.setdefault(operation, OperationStats()).add(duration_ms, success)

        if duration_ms > SLOW_OPERATION_MS:
            self.logger.warning(
                f"Slow operation: {operation} took {duration_ms:.0f}ms",
                context={"operation": operation, "duration_ms": duration_ms},
            )
        elif not success:
            self.logger.debug(f"Operation failed: {operation}", context={"operation": operation, "error": error})
        else:
            self.logger.log_performance(operation, duration_ms)

    def get_stats(self, operation: Optional[str] = None) -> Dict[str, Dict[str, float]]:
        """Summaries keyed by operation, or the summary of one operation ({} when unseen)."""
        with self._lock:
            if operation is not None:
                stats = self._stats.get(operation)
                return stats.summary() if stats is not None else {}
            return {name: stats.summary() for name, stats in sorted(self._stats.items())}

    def clear(self) -> None:
        with self._lock:
            self._stats.clear()


_metrics_collector: Optional[MetricsCollector] = None


def get_metrics_collector() -> MetricsCollector:
    global _metrics_collector
    if _metrics_collector is None:
        _metrics_collector = MetricsCollector()
    return _metrics_collector


class Stopwatch:
    """Times a block and records it under `operation`."""

    def __init__(self, operation: str):
        self.operation = operation
        self.seconds = 0.0
        self._start = 0.0

    def __enter__(self) -> "Stopwatch":
        self._start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        self.seconds = time.perf_counter() - self._start
        get_metrics_collector().record(
            self.operation,
            self.seconds * 1000.0,
            success=exc_type is None,
            error=str(exc) if exc is not None else None,
        )


def track_performance(operation_name: str):
    """
    Decorator recording the duration of every call.

    Usage:
        @track_performance("picard_solve")
        def picard_solve(...):
            ...
    """

    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(*args, **kwargs):
            start = time.perf_counter()
            error = None
            try:
                return func(*args, **kwargs)
            except Exception as e:
                error = str(e)
                raise
            finally:
                get_metrics_collector().record(
                    operation_name,
                    (time.perf_counter() - start) * 1000.0,
                    success=error is None,
                    error=error,
                )

        return wrapper

    return decorator
