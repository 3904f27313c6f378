"""
Orbit segments phi^k(omega), 0 <= k <= N, with exact cycle detection.
"""

import logging
from dataclasses import dataclass
from typing import Any, Optional

from src.utils.config import config
from src.utils.errors import RationalOverflow
from .catalog import SystemSpec
from .points import RationalVec, SymbolicPoint

logger = logging.getLogger(__name__)


@dataclass
class OrbitSegment:
    """Points phi^k(start) for k = 0..N and the first exact repeat, if any."""
    start: Any
    points: list
    cycle_info: Optional[tuple[int, int]] = None  # (preperiod k0, period p)

    def __len__(self) -> int:
        return len(self.points)


def is_exact(point: Any) -> bool:
    return isinstance(point, (RationalVec, SymbolicPoint))


def _check_denominators(point: Any, max_bits: int) -> None:
    if isinstance(point, RationalVec):
        for c in point.coords:
            if c.denominator.bit_length() > max_bits:
                raise RationalOverflow(
                    f"Denominator of {float(c):.6g} has {c.denominator.bit_length()} bits (limit {max_bits})"
                )


def iterate(s: SystemSpec, omega: Any, n: int, max_bits: Optional[int] = None) -> OrbitSegment:
    """
    Compute phi^k(omega) for 0 <= k <= n.

    On exact representations the first repeat phi^{k0} = phi^{k0+p} is recorded
    and the rest of the segment is read off the cycle.

    Args:
        s: System
        omega: Starting point valid for s
        n: Number of steps (>= 0)
        max_bits: Denominator bit bound (default: from config)

    Returns:
        OrbitSegment with n + 1 points.

    Raises:
        RationalOverflow: if an exact denominator exceeds the bound.
        Errors raised by the map or the point check.
    """
    if n < 0:
        raise ValueError(f"Orbit length must be nonnegative, got {n}")
    s.check_point(omega)
    max_bits = config.numerics.rational_bits if max_bits is None else max_bits
    exact = is_exact(omega)
    _check_denominators(omega, max_bits)

    points = [omega]
    seen: dict[Any, int] = {omega: 0} if exact else {}
    cycle_info: Optional[tuple[int, int]] = None

    for k in range(1, n + 1):
        if cycle_info is not None:
            k0, period = cycle_info
            points.append(points[k0 + (k - k0) % period])
            continue

        nxt = s.phi(points[-1])
        _check_denominators(nxt, max_bits)
        exact = exact and is_exact(nxt)

        if exact:
            if nxt in seen:
                k0 = seen[nxt]
                cycle_info = (k0, k - k0)
                logger.debug(f"{s.name}: exact cycle at k0={k0}, period={k - k0}")
            else:
                seen[nxt] = k
        points.append(nxt)

    return OrbitSegment(start=omega, points=points, cycle_info=cycle_info)
