"""Tests for the scenario registry and the built-in acceptance scenarios."""

import pytest

from src.scenarios import (
    SCENARIOS,
    Measurement,
    ScenarioResult,
    run_scenarios,
    select_scenarios,
    summary_frame,
)
from src.scenarios.suite import square_setup
from src.utils.errors import UsageError

QUICK = ["torus-shear", "golden-rotation", "doubling-cycle", "riesz-validation"]
SLOW = ["tame-oracle", "square-decomposition", "block-sequence", "flatness-dichotomy", "invariant-suites"]


class TestRegistry:
    def test_every_criterion_registered(self):
        assert sorted(s.criterion for s in SCENARIOS.values()) == list(range(1, 10))
        assert set(SCENARIOS) == set(QUICK + SLOW)

    def test_all_is_sorted_by_criterion(self):
        assert [s.criterion for s in select_scenarios("all")] == list(range(1, 10))

    def test_unknown_id(self):
        with pytest.raises(UsageError):
            select_scenarios("torus-shear,warp-drive")

    def test_empty_selection(self):
        with pytest.raises(UsageError):
            select_scenarios(" , ")


class TestMeasurement:
    def test_relations(self):
        assert Measurement("a", 1, 1, "==", "TRIVIAL").passed
        assert Measurement("b", 0.1, 0.2, "<=", "DERIVED").passed
        assert not Measurement("c", 0.1, 0.2, ">=", "DERIVED").passed
        assert Measurement("d", 1.0, 1.0 + 1e-13, "~", "DERIVED", tolerance=1e-12).passed

    def test_unknown_relation(self):
        with pytest.raises(ValueError):
            Measurement("e", 1, 1, "!=", "TRIVIAL")

    def test_result_without_measurements_fails(self):
        assert not ScenarioResult(scenario="x", criterion=0, title="empty").passed

    def test_timings_only_on_request(self):
        result = ScenarioResult(scenario="x", criterion=0, title="t", wall_time=1.5, budget=2.0)
        assert "wall_time_s" not in result.to_dict()
        assert result.to_dict(timings=True)["budget_s"] == 2.0


class TestQuickScenarios:
    @pytest.mark.parametrize("scenario_id", QUICK)
    def test_passes(self, scenario_id):
        (result,) = run_scenarios(scenario_id, max_workers=2)
        assert result.passed, [m for m in result.measurements if not m.passed]

    def test_summary_frame(self):
        results = run_scenarios("torus-shear,doubling-cycle", max_workers=2)
        df = summary_frame(results, timings=True)
        assert list(df["scenario"]) == ["torus-shear", "doubling-cycle"]
        assert df["pass"].all()
        assert "wall_time_s" in df.columns
        assert "wall_time_s" not in summary_frame(results).columns


@pytest.mark.slow
class TestSlowScenarios:
    @pytest.mark.parametrize("scenario_id", SLOW)
    def test_passes(self, scenario_id):
        (result,) = run_scenarios(scenario_id, max_workers=4)
        assert result.passed, [m for m in result.measurements if not m.passed]

    def test_square_decomposition_records_its_checkpoints(self):
        (result,) = run_scenarios("square-decomposition", max_workers=4)
        assert result.details["checkpoints"] == square_setup()[2] == [250, 500, 1000, 2000]
        assert result.passed
