"""
Scenario registry, measurements and the summary table.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import pandas as pd

from src.utils.errors import UsageError

logger = logging.getLogger(__name__)


@dataclass
class Measurement:
    """A measured value checked against an expected value."""
    name: str
    measured: Any
    expected: Any
    relation: str          # "==" | "<=" | ">=" | "~"
    provenance: str        # PUBLISHED | DERIVED | TRIVIAL
    tolerance: Optional[float] = None
    passed: bool = field(init=False)

    def __post_init__(self):
        if self.relation == "==":
            self.passed = self.measured == self.expected
        elif self.relation == "<=":
            self.passed = self.measured <= self.expected
        elif self.relation == ">=":
            self.passed = self.measured >= self.expected
        elif self.relation == "~":
            self.passed = abs(self.measured - self.expected) <= self.tolerance
        else:
            raise ValueError(f"Unknown relation {self.relation!r}")
        self.passed = bool(self.passed)


@dataclass
class ScenarioContext:
    seed: int = 0
    max_workers: Optional[int] = None


@dataclass
class ScenarioResult:
    """Outcome of one acceptance scenario."""
    scenario: str
    criterion: int
    title: str
    measurements: list[Measurement] = field(default_factory=list)
    details: dict = field(default_factory=dict)
    wall_time: float = 0.0
    budget: Optional[float] = None

    @property
    def passed(self) -> bool:
        return bool(self.measurements) and all(m.passed for m in self.measurements)

    def to_dict(self, timings: bool = False) -> dict:
        payload = {
            "scenario": self.scenario,
            "criterion": self.criterion,
            "title": self.title,
            "pass": self.passed,
            "measurements": [
                {
                    "name": m.name,
                    "measured": m.measured,
                    "expected": m.expected,
                    "relation": m.relation,
                    "tolerance": m.tolerance,
                    "provenance": m.provenance,
                    "pass": m.passed,
                }
                for m in self.measurements
            ],
            "details": self.details,
        }
        if timings:
            payload["wall_time_s"] = self.wall_time
            payload["budget_s"] = self.budget
        return payload


@dataclass(frozen=True)
class Scenario:
    id: str
    criterion: int
    title: str
    fn: Callable[[ScenarioContext, ScenarioResult], None]
    budget: Optional[float] = None


SCENARIOS: dict[str, Scenario] = {}


def scenario(scenario_id: str, criterion: int, title: str, budget: Optional[float] = None):
    """Register a scenario function fn(ctx, result) that appends measurements."""
    def register(fn):
        SCENARIOS[scenario_id] = Scenario(scenario_id, criterion, title, fn, budget)
        return fn
    return register


def select_scenarios(selection: Optional[str]) -> list[Scenario]:
    """
    Resolve a comma-separated list of ids ("all" or None for every scenario).

    Raises:
        UsageError: on an unknown id.
    """
    if selection is None or selection == "all":
        return sorted(SCENARIOS.values(), key=lambda s: s.criterion)
    chosen = []
    for scenario_id in (part.strip() for part in selection.split(",") if part.strip()):
        if scenario_id not in SCENARIOS:
            known = ", ".join(sorted(SCENARIOS))
            raise UsageError(f"Unknown scenario {scenario_id!r} (known: {known})")
        chosen.append(SCENARIOS[scenario_id])
    if not chosen:
        raise UsageError("No scenario selected")
    return chosen


def run_scenarios(selection: Optional[str] = None, seed: int = 0, max_workers: Optional[int] = None) -> list[ScenarioResult]:
    """
    Run the selected acceptance scenarios in criterion order.

    Returns:
        One ScenarioResult per scenario.
    """
    ctx = ScenarioContext(seed=seed, max_workers=max_workers)
    results = []
    for spec in select_scenarios(selection):
        logger.info(f"Scenario {spec.id} (criterion {spec.criterion}): {spec.title}")
        result = ScenarioResult(scenario=spec.id, criterion=spec.criterion, title=spec.title, budget=spec.budget)
        start = time.perf_counter()
        spec.fn(ctx, result)
        result.wall_time = time.perf_counter() - start

        status = "PASS" if result.passed else "FAIL"
        logger.info(f"Scenario {spec.id}: {status} in {result.wall_time:.2f}s")
        for m in result.measurements:
            if not m.passed:
                logger.warning(f"  {m.name}: measured {m.measured} vs expected {m.relation} {m.expected}")
        if spec.budget is not None and result.wall_time > spec.budget:
            logger.warning(f"Scenario {spec.id} took {result.wall_time:.2f}s (budget {spec.budget}s)")
        results.append(result)
    return results


def summary_frame(results: list[ScenarioResult], timings: bool = False) -> pd.DataFrame:
    """One row per scenario: id, criterion, verdict and measurement counts."""
    rows = []
    for r in results:
        row = {
            "scenario": r.scenario,
            "criterion": r.criterion,
            "pass": r.passed,
            "measurements": len(r.measurements),
            "failed": sum(not m.passed for m in r.measurements),
        }
        if timings:
            row["wall_time_s"] = r.wall_time
        rows.append(row)
    return pd.DataFrame(rows)
