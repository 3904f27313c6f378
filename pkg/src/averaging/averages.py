"""
Weighted ergodic averages (U_n x)(omega) = sum_k s_{n,k} x(phi^k omega) and
their traces along checkpoints, with the invariance residual
r_n(x) = |<x o phi, V_n delta_omega> - <x, V_n delta_omega>|.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

from src.summation.methods import SummationMethod
from src.systems.catalog import SystemSpec
from src.systems.observables import Observable
from src.systems.orbit import OrbitSegment, iterate
from src.systems.points import Number
from src.utils.config import config
from src.utils.errors import InvalidParameter
from .measures import EmpiricalMeasure, weighted_sum

logger = logging.getLogger(__name__)


def geometric_checkpoints(n_max: int, ratio: Optional[float] = None) -> list[int]:
    """Distinct values ceil(ratio^i) <= n_max, always ending with n_max."""
    ratio = ratio or config.averaging.checkpoint_ratio
    if ratio <= 1:
        raise InvalidParameter(f"Checkpoint ratio must exceed 1, got {ratio}")
    checkpoints: list[int] = []
    i = 0
    while True:
        n = math.ceil(ratio ** i)
        if n > n_max:
            break
        if not checkpoints or n > checkpoints[-1]:
            checkpoints.append(n)
        i += 1
    if not checkpoints or checkpoints[-1] != n_max:
        checkpoints.append(n_max)
    return checkpoints


def weighted_average(
    s: SystemSpec,
    m: SummationMethod,
    omega: Any,
    n: int,
    x: Observable,
    orbit: Optional[OrbitSegment] = None
) -> Number:
    """
    (U_n x)(omega) = sum_k s_{n,k} x(phi^k omega).

    Exact when the row, the orbit and the values of x are rational.

    Args:
        orbit: Precomputed orbit from omega covering the row's support (optional)
    """
    row = m.row(n)
    if orbit is None or len(orbit) <= row.max_index:
        orbit = iterate(s, omega, row.max_index)
    return weighted_sum([w for _, w in row.weights], [x(orbit.points[k]) for k, _ in row.weights])


def empirical_measure(
    s: SystemSpec,
    m: SummationMethod,
    omega: Any,
    n: int,
    orbit: Optional[OrbitSegment] = None
) -> EmpiricalMeasure:
    """V_n delta_omega, atoms merged by exact point equality."""
    row = m.row(n)
    if orbit is None or len(orbit) <= row.max_index:
        orbit = iterate(s, omega, row.max_index)
    return EmpiricalMeasure.from_row(orbit.points, row)


@dataclass
class AverageTrace:
    """Averages and invariance residuals of every observable at each checkpoint."""
    point: Any
    method: str
    checkpoints: list[int]
    values: dict[str, list[Number]]
    residuals: dict[str, list[Number]]
    sup_norms: dict[str, float]
    system: SystemSpec = field(repr=False)
    summation: SummationMethod = field(repr=False)
    orbit: OrbitSegment = field(repr=False)

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "system": self.system.name,
            "checkpoints": self.checkpoints,
            "values": self.values,
            "residuals": self.residuals,
            "cycle_info": self.orbit.cycle_info,
        }


def trace(
    s: SystemSpec,
    m: SummationMethod,
    omega: Any,
    checkpoints: Sequence[int],
    observables: Optional[Sequence[Observable]] = None
) -> AverageTrace:
    """
    Record (U_n x)(omega) and r_n(x) for each checkpoint n and observable x.

    The orbit is computed once, one step past the widest row, and observable
    values along it are shared by every checkpoint.

    Raises:
        InvalidParameter: if checkpoints are empty or not strictly increasing.
    """
    checkpoints = list(checkpoints)
    if not checkpoints or any(b <= a for a, b in zip(checkpoints, checkpoints[1:])):
        raise InvalidParameter(f"Checkpoints must be nonempty and strictly increasing: {checkpoints[:8]}")
    observables = list(observables) if observables is not None else list(s.dictionary)

    rows = [m.row(n) for n in checkpoints]
    horizon = max(row.max_index for row in rows) + 1
    orbit = iterate(s, omega, horizon)
    logger.debug(f"{s.name}: orbit of length {len(orbit)} for {len(checkpoints)} checkpoints")

    values: dict[str, list[Number]] = {}
    residuals: dict[str, list[Number]] = {}
    for x in observables:
        along = [x(p) for p in orbit.points]
        values[x.name] = []
        residuals[x.name] = []
        for row in rows:
            weights = [w for _, w in row.weights]
            values[x.name].append(weighted_sum(weights, [along[k] for k, _ in row.weights]))
            increments = [along[k + 1] - along[k] for k, _ in row.weights]
            residuals[x.name].append(abs(weighted_sum(weights, increments)))

    return AverageTrace(
        point=omega,
        method=m.name,
        checkpoints=checkpoints,
        values=values,
        residuals=residuals,
        sup_norms={x.name: x.sup_norm for x in observables},
        system=s,
        summation=m,
        orbit=orbit
    )
