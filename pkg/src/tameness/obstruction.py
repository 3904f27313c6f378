"""
Periodic-point obstruction for interval maps.

A tame interval map has only periodic points of period 2^k, so an exact cycle
of any other period proves the map untame. Not finding one proves nothing.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

from src.averaging.measures import describe_point
from src.systems.catalog import SystemSpec
from src.systems.orbit import is_exact, iterate
from src.utils.errors import InvalidParameter

logger = logging.getLogger(__name__)


@dataclass
class ObstructionReport:
    verdict: str                                  # "untame" | "no obstruction found"
    witness: Optional[Any] = None
    period: Optional[int] = None
    cycles: list[dict] = field(default_factory=list)
    skipped: int = 0

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "witness": describe_point(self.witness) if self.witness is not None else None,
            "period": self.period,
            "cycles": self.cycles,
            "skipped_inexact": self.skipped,
        }


def _power_of_two(p: int) -> bool:
    return p > 0 and p & (p - 1) == 0


def periodic_point_obstruction(s: SystemSpec, points: Sequence[Any], n: int = 256) -> ObstructionReport:
    """
    Iterate each exact point up to n steps and look for a cycle whose period is
    not a power of two.

    Raises:
        InvalidParameter: if s is not an interval map.
    """
    if s.kind != "interval":
        raise InvalidParameter(f"Periodic-point obstruction applies to interval maps, got {s.kind}")

    report = ObstructionReport(verdict="no obstruction found")
    for omega in points:
        if not is_exact(omega):
            report.skipped += 1
            continue
        orbit = iterate(s, omega, n)
        if orbit.cycle_info is None:
            continue
        k0, period = orbit.cycle_info
        report.cycles.append({"point": describe_point(omega), "preperiod": k0, "period": period})
        if not _power_of_two(period) and report.witness is None:
            report.verdict = "untame"
            report.witness = orbit.points[k0]
            report.period = period

    if report.skipped:
        logger.debug(f"Skipped {report.skipped} float points")
    logger.info(f"{s.name}: {report.verdict} ({len(report.cycles)} exact cycles)")
    return report
