"""
Observables: the finite test-function dictionaries standing in for C(Omega).
"""

import bisect
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Optional, Sequence

import numpy as np

from src.utils.errors import InvalidParameter
from src.utils.result_store import ResultStore, parse_number
from .points import Number

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Observable:
    """A named bounded function on phase points."""
    name: str
    fn: Callable[[Any], Number]
    sup_norm: float

    def __call__(self, point: Any) -> Number:
        return self.fn(point)


class PiecewiseLinear:
    """
    Piecewise-linear function of one variable given by breakpoints (t_i, y_i).

    Exact inputs against exact breakpoints give exact outputs; otherwise
    evaluation goes through np.interp.
    """

    def __init__(self, breakpoints: Sequence[Sequence[Number]]):
        if len(breakpoints) < 2:
            raise InvalidParameter("Piecewise-linear function needs at least two breakpoints")
        ts = [p[0] for p in breakpoints]
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise InvalidParameter(f"Breakpoints must have strictly increasing t: {ts}")
        self.ts = list(ts)
        self.ys = [p[1] for p in breakpoints]
        self.exact = all(isinstance(v, (Fraction, int)) for v in self.ts + self.ys)
        self._ts_float = np.array([float(t) for t in self.ts])
        self._ys_float = np.array([float(y) for y in self.ys])

    @property
    def sup_norm(self) -> float:
        return float(max(abs(y) for y in self.ys))

    def __call__(self, t: Number) -> Number:
        if self.exact and isinstance(t, (Fraction, int)):
            if t <= self.ts[0]:
                return Fraction(self.ys[0])
            if t >= self.ts[-1]:
                return Fraction(self.ys[-1])
            i = bisect.bisect_right(self.ts, t) - 1
            t0, t1 = Fraction(self.ts[i]), Fraction(self.ts[i + 1])
            y0, y1 = Fraction(self.ys[i]), Fraction(self.ys[i + 1])
            return y0 + (y1 - y0) * (Fraction(t) - t0) / (t1 - t0)
        return float(np.interp(float(t), self._ts_float, self._ys_float))


def coordinate(index: int, name: str) -> Observable:
    return Observable(name, lambda p: p.coords[index], 1.0)


def constant_one() -> Observable:
    return Observable("one", lambda p: 1, 1.0)


def character(m: Sequence[int], kind: str, name: Optional[str] = None) -> Observable:
    """cos or sin of 2*pi*<m, omega> on the torus."""
    trig = math.cos if kind == "cos" else math.sin

    def fn(p) -> float:
        phase = sum(mi * float(c) for mi, c in zip(m, p.coords))
        return trig(2 * math.pi * phase)

    label = name or f"{kind}{list(m)}".replace(" ", "")
    return Observable(label, fn, 1.0)


def load_piecewise_observables(path: str, store: Optional[ResultStore] = None) -> list[Observable]:
    """
    Load user observables {"observables": [{"name": ..., "breakpoints": [[t, y], ...]}]}.

    The observables read the first coordinate of the point.
    """
    store = store or ResultStore()
    data = store.load_json(path)
    entries = data.get("observables") if isinstance(data, dict) else None
    if not isinstance(entries, list) or not entries:
        raise InvalidParameter(f"Observable file {path} needs a non-empty 'observables' list")

    observables = []
    for entry in entries:
        name = entry.get("name")
        points = [[parse_number(t), parse_number(y)] for t, y in entry.get("breakpoints", [])]
        if not name:
            raise InvalidParameter(f"Observable without a name in {path}")
        pl = PiecewiseLinear(points)
        observables.append(Observable(name, lambda p, pl=pl: pl(p.coords[0]), pl.sup_norm))

    logger.info(f"Loaded {len(observables)} piecewise-linear observables from {path}")
    return observables
