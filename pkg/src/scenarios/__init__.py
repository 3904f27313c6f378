"""
Scenarios

Built-in reproductions of the acceptance criteria and their summary tables.
"""

from .base import (
    Measurement,
    ScenarioContext,
    ScenarioResult,
    SCENARIOS,
    run_scenarios,
    select_scenarios,
    summary_frame,
)
from . import suite  # registers the scenarios
