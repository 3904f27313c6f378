"""
Convergence Detection for Average Traces

Classifies the tail of an AverageTrace as converged, oscillating or undecided.
Convergence along n -> infinity is not finitely decidable, so every verdict
carries the tail gap and the checkpoints realizing it.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

from src.utils.config import config
from src.utils.errors import InvalidParameter, TooFewCheckpoints
from .averages import AverageTrace
from .measures import EmpiricalMeasure

logger = logging.getLogger(__name__)

MIN_CHECKPOINTS = 4


@dataclass
class ConvergenceVerdict:
    """Result of convergence detection for one trace."""
    status: str                          # "converged" | "oscillating" | "undecided"
    cauchy_gap: float                    # max tail oscillation / sup-norm
    evidence: dict = field(default_factory=dict)
    limit: Optional[EmpiricalMeasure] = None
    residual: float = 0.0                # max normalized invariance residual at the last checkpoint

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "cauchy_gap": self.cauchy_gap,
            "evidence": self.evidence,
            "residual": self.residual,
            "limit": self.limit.to_dict() if self.limit is not None else None,
        }


def detect_convergence(
    t: AverageTrace,
    tol: Optional[float] = None,
    sep: Optional[float] = None
) -> ConvergenceVerdict:
    """
    Classify a trace by the oscillation of its tail.

    Algorithm:
    1. Tail = latter half of the checkpoints.
    2. Per observable: spread of tail values divided by the sup-norm.
    3. Gap = largest spread; evidence = observable and the two checkpoints realizing it.
    4. Classify: converged (gap <= tol), oscillating (gap >= sep), undecided (between).

    Args:
        t: Trace with at least 4 checkpoints
        tol: Convergence tolerance (default: from config)
        sep: Oscillation threshold (default: from config)

    Returns:
        ConvergenceVerdict; limit = empirical measure at the last checkpoint when converged.

    Raises:
        TooFewCheckpoints: if the trace has fewer than 4 checkpoints.
    """
    tol = config.averaging.tol if tol is None else tol
    sep = config.averaging.sep if sep is None else sep
    if tol >= sep:
        raise InvalidParameter(f"tol ({tol}) must be smaller than sep ({sep})")

    count = len(t.checkpoints)
    if count < MIN_CHECKPOINTS:
        raise TooFewCheckpoints(f"Need at least {MIN_CHECKPOINTS} checkpoints, got {count}")

    start = count // 2
    gap = 0.0
    evidence: dict = {}
    for name, series in t.values.items():
        norm = t.sup_norms.get(name) or 1.0
        tail = [float(v) / norm for v in series[start:]]
        hi = max(range(len(tail)), key=lambda i: tail[i])
        lo = min(range(len(tail)), key=lambda i: tail[i])
        spread = tail[hi] - tail[lo]
        if spread > gap or not evidence:
            gap = spread
            evidence = {
                "observable": name,
                "checkpoints": [t.checkpoints[start + hi], t.checkpoints[start + lo]],
                "values": [series[start + hi], series[start + lo]],
            }

    residual = max(
        (float(series[-1]) / (t.sup_norms.get(name) or 1.0) for name, series in t.residuals.items()),
        default=0.0
    )

    if gap <= tol:
        status = "converged"
    elif gap >= sep:
        status = "oscillating"
    else:
        status = "undecided"

    limit = None
    if status == "converged":
        limit = EmpiricalMeasure.from_row(t.orbit.points, t.summation.row(t.checkpoints[-1]))

    logger.debug(f"{t.system.name}: {status} (gap={gap:.3g}, tol={tol}, sep={sep})")

    return ConvergenceVerdict(
        status=status,
        cauchy_gap=gap,
        evidence=evidence,
        limit=limit,
        residual=residual
    )
