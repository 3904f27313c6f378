"""
Empirical measures: finite weighted Dirac combinations along an orbit.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

from src.summation.methods import Weight, WeightVector
from src.systems.points import Number


def _is_rational(value: Any) -> bool:
    return isinstance(value, (Fraction, int)) and not isinstance(value, bool)


def weighted_sum(weights: Sequence[Weight], values: Sequence[Number]) -> Number:
    """
    sum_i weights[i] * values[i].

    Exact when every weight and value is rational: runs of equal weights are
    summed first, so a Cesaro row costs one multiplication. Otherwise the sum is
    a correctly rounded math.fsum of float products.
    """
    if all(_is_rational(w) for w in weights) and all(_is_rational(v) for v in values):
        total = Fraction(0)
        run_weight = None
        run_sum: Number = 0
        for w, v in zip(weights, values):
            if run_weight is not None and (w is run_weight or w == run_weight):
                run_sum += v
            else:
                if run_weight is not None:
                    total += run_weight * run_sum
                run_weight, run_sum = w, v
        if run_weight is not None:
            total += run_weight * run_sum
        return total
    return math.fsum(float(w) * float(v) for w, v in zip(weights, values))


@dataclass(frozen=True)
class EmpiricalMeasure:
    """Atoms (point, weight); pairing <x, mu> = sum_i w_i x(p_i)."""
    atoms: tuple[tuple[Any, Weight], ...]

    @classmethod
    def from_row(cls, points: Sequence[Any], row: WeightVector) -> "EmpiricalMeasure":
        """V_n delta_omega: orbit points weighted by one summation row, atoms merged."""
        return cls(tuple((points[k], w) for k, w in row.weights)).merged()

    @classmethod
    def dirac(cls, point: Any) -> "EmpiricalMeasure":
        return cls(((point, Fraction(1)),))

    @classmethod
    def uniform(cls, points: Iterable[Any]) -> "EmpiricalMeasure":
        points = list(points)
        w = Fraction(1, len(points))
        return cls(tuple((p, w) for p in points)).merged()

    @property
    def exact(self) -> bool:
        return all(_is_rational(w) for _, w in self.atoms)

    @property
    def normalization(self) -> Weight:
        weights = [w for _, w in self.atoms]
        if self.exact:
            return sum(weights, Fraction(0))
        return math.fsum(float(w) for w in weights)

    @property
    def support(self) -> list[Any]:
        return [p for p, _ in self.atoms]

    def pair(self, x: Callable[[Any], Number]) -> Number:
        return weighted_sum([w for _, w in self.atoms], [x(p) for p, _ in self.atoms])

    def merged(self) -> "EmpiricalMeasure":
        """Merge atoms at equal points (exact representation equality only)."""
        merged: dict[Any, Weight] = {}
        for p, w in self.atoms:
            merged[p] = merged[p] + w if p in merged else w
        return EmpiricalMeasure(tuple(merged.items()))

    def push_forward(self, phi: Callable[[Any], Any]) -> "EmpiricalMeasure":
        """Image measure V mu = mu o phi^{-1}."""
        return EmpiricalMeasure(tuple((phi(p), w) for p, w in self.atoms)).merged()

    def to_dict(self, max_atoms: int = 64) -> dict:
        shown = self.atoms[:max_atoms]
        return {
            "atoms": [{"point": describe_point(p), "weight": w} for p, w in shown],
            "support_size": len(self.atoms),
            "truncated": len(self.atoms) > max_atoms,
            "normalization": self.normalization,
        }


def describe_point(point: Any) -> Any:
    coords = getattr(point, "coords", None)
    if coords is not None:
        return list(coords)
    if getattr(point, "rule", None):
        return f"rule={point.rule},offset={point.offset}"
    return f"pre={point.preperiod},per={point.period}"
