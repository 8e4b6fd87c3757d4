"""
Tests for pipeline observability.
"""
import pytest

from app.observability import PipelineObservability, observability, track_stage


class TestPipelineObservability:
    """Counters, snapshot and status."""

    def test_snapshot_aggregates(self):
        obs = PipelineObservability()
        obs.track_metric("stage_duration_ms", 1.5)
        obs.track_metric("stage_duration_ms", 2.0)
        obs.track_event("pair_analyzed")
        obs.track_event("pair_analyzed")
        obs.track_exception(ValueError("boom"))
        snap = obs.snapshot()
        assert snap["metrics"] == {"stage_duration_ms": {"count": 2, "total": 3.5}}
        assert snap["events"] == {"pair_analyzed": 2}
        assert snap["exceptions"] == {"ValueError": 1}

    def test_get_status(self, monkeypatch):
        monkeypatch.setenv("SERVICE_VERSION", "2.1.0")
        obs = PipelineObservability()
        obs.track_event("a")
        obs.track_metric("m", 1)
        status = obs.get_status()
        assert status == {
            "service_version": "2.1.0",
            "metrics_tracked": 1,
            "events_tracked": 1,
            "exceptions_tracked": 0,
        }

    def test_reset(self):
        obs = PipelineObservability()
        obs.track_metric("m", 1)
        obs.reset()
        assert obs.snapshot() == {"metrics": {}, "events": {}, "exceptions": {}}


class TestTrackStage:
    """The stage decorator records durations and failures on the singleton."""

    def test_success_records_duration(self):
        @track_stage("square")
        def square(x):
            return x * x

        assert square(3) == 9
        metrics = observability.snapshot()["metrics"]
        assert metrics["square_duration_ms"]["count"] == 1

    def test_failure_records_exception(self):
        @track_stage("explode")
        def explode():
            raise ValueError("Test error")

        with pytest.raises(ValueError, match="Test error"):
            explode()
        snap = observability.snapshot()
        assert snap["exceptions"] == {"ValueError": 1}
        assert "explode_duration_ms" not in snap["metrics"]

    def test_pipeline_stages_are_tracked(self):
        from app.pipeline import analyze_pair
        from app.schemas import PairDescriptor

        analyze_pair(PairDescriptor(family="gl_orthogonal", params={"n": 3}))
        assert any(name.endswith("_duration_ms") for name in observability.snapshot()["metrics"])
