"""
Unit Tests for Metrics
======================
Test operation timing aggregates.
"""

import pytest

from core.metrics import MetricsCollector, OperationStats, Stopwatch, get_metrics_collector, track_performance


@pytest.fixture
def collector():
    collector = get_metrics_collector()
    collector.clear()
    yield collector
    collector.clear()


class TestOperationStats:
    """Test OperationStats."""

    def test_empty_summary(self):
        """Test that an unseen operation summarizes to zeros."""
        assert OperationStats().summary()["count"] == 0

    def test_aggregates(self):
        """Test count, extremes and error rate."""
        stats = OperationStats()
        stats.add(10.0, True)
        stats.add(30.0, False)
        summary = stats.summary()
        assert summary["count"] == 2
        assert summary["avg_ms"] == pytest.approx(20.0)
        assert summary["min_ms"] == 10.0
        assert summary["max_ms"] == 30.0
        assert summary["error_rate"] == pytest.approx(0.5)


class TestMetricsCollector:
    """Test MetricsCollector and its helpers."""

    def test_record_and_filter(self):
        """Test that get_stats filters by operation."""
        collector = MetricsCollector()
        collector.record("modulation_norm", 2.0)
        collector.record("picard_solve", 7.0, success=False, error="no convergence")
        assert set(collector.get_stats()) == {"modulation_norm", "picard_solve"}
        assert collector.get_stats("picard_solve")["error_rate"] == 1.0
        assert collector.get_stats("missing") == {}

    def test_stopwatch(self, collector):
        """Test that a Stopwatch records its block."""
        with Stopwatch("block") as watch:
            sum(range(1000))
        assert watch.seconds >= 0.0
        assert collector.get_stats("block")["count"] == 1

    def test_decorator_records_failures(self, collector):
        """Test that track_performance records raised exceptions and re-raises them."""

        @track_performance("failing")
        def failing():
            raise RuntimeError("boom")

        with pytest.raises(RuntimeError):
            failing()
        assert collector.get_stats("failing")["error_rate"] == 1.0
