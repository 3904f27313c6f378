"""
Summation methods: rows of the matrix S = {s_{n,k}} and combinators on them.

A method is an immutable row generator. Rows are built on demand and never
cached; exact methods (Cesaro, Riesz with rational p) emit Fractions.
"""

import logging
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from src.utils.errors import (
    MatrixRowOutOfRange,
    NegativeWeight,
    NonIncreasingIndexMap,
    NonMonotoneWeights,
    NonPositiveWeight,
)

logger = logging.getLogger(__name__)

Weight = Union[Fraction, float]


@dataclass(frozen=True)
class WeightVector:
    """One row of a summation matrix."""
    n: int
    weights: tuple[tuple[int, Weight], ...]  # (k, s_{n,k}), k ascending, nonzero entries only

    @property
    def exact(self) -> bool:
        return all(isinstance(w, (Fraction, int)) for _, w in self.weights)

    @property
    def max_index(self) -> int:
        return self.weights[-1][0] if self.weights else 0

    def total(self) -> Weight:
        """Row sum; exact for rational rows."""
        if self.exact:
            return sum((w for _, w in self.weights), Fraction(0))
        return math.fsum(float(w) for _, w in self.weights)

    def dense(self) -> list[Weight]:
        """Weights as a list indexed by k = 0..max_index."""
        out: list[Weight] = [Fraction(0) if self.exact else 0.0] * (self.max_index + 1)
        for k, w in self.weights:
            out[k] = w
        return out


@dataclass(frozen=True)
class SummationMethod:
    """A named, pure row generator."""
    name: str
    kind: str  # cesaro | riesz | custom-matrix | interleaved | subsequence
    generator: Callable[[int], WeightVector]

    def row(self, n: int) -> WeightVector:
        if n < 0:
            raise ValueError(f"Row index must be nonnegative, got {n}")
        return self.generator(n)


def cesaro(exact: bool = True) -> SummationMethod:
    """
    Cesaro means: s_{n,k} = 1/(n+1) for k <= n.

    Args:
        exact: Emit Fractions (default) or floats
    """
    def generator(n: int) -> WeightVector:
        w: Weight = Fraction(1, n + 1) if exact else 1.0 / (n + 1)
        return WeightVector(n=n, weights=tuple((k, w) for k in range(n + 1)))

    return SummationMethod(name="cesaro" if exact else "cesaro-float", kind="cesaro", generator=generator)


def harmonic_weights(exact: bool = False) -> Callable[[int], Weight]:
    """The logarithmic Riesz sequence p_k = 1/(k+1)."""
    if exact:
        return lambda k: Fraction(1, k + 1)
    return lambda k: 1.0 / (k + 1)


def riesz(p: Callable[[int], Weight], name: str = "riesz") -> SummationMethod:
    """
    Riesz means: s_{n,k} = p_k / (p_0 + ... + p_n).

    Monotonicity and positivity of p are checked on every prefix a row touches.

    Args:
        p: Positive nonincreasing sequence k -> p_k
        name: Method name for reports

    Raises (from row):
        NonPositiveWeight, NonMonotoneWeights
    """
    def generator(n: int) -> WeightVector:
        prefix = [p(k) for k in range(n + 1)]
        for k, pk in enumerate(prefix):
            if pk <= 0:
                raise NonPositiveWeight(f"{name}: p_{k} = {pk} <= 0")
            if k > 0 and pk > prefix[k - 1]:
                raise NonMonotoneWeights(f"{name}: p_{k} = {pk} > p_{k - 1} = {prefix[k - 1]}")

        if all(isinstance(pk, (Fraction, int)) for pk in prefix):
            total = sum((Fraction(pk) for pk in prefix), Fraction(0))
            weights = tuple((k, Fraction(pk) / total) for k, pk in enumerate(prefix))
        else:
            total_f = math.fsum(float(pk) for pk in prefix)
            weights = tuple((k, float(pk) / total_f) for k, pk in enumerate(prefix))
        return WeightVector(n=n, weights=weights)

    return SummationMethod(name=name, kind="riesz", generator=generator)


def custom_matrix(rows: Sequence[Sequence[tuple[int, Weight]]], name: str = "matrix") -> SummationMethod:
    """
    A finite summation matrix given row by row as (k, s_{n,k}) pairs.

    Rows are stored as given; row sums are not enforced here (validate_method
    reports the defect).

    Raises (from row):
        MatrixRowOutOfRange, NegativeWeight
    """
    frozen_rows = []
    for n, entries in enumerate(rows):
        cleaned = sorted((int(k), w) for k, w in entries)
        for k, w in cleaned:
            if k < 0:
                raise MatrixRowOutOfRange(f"{name}: row {n} has negative column {k}")
            if w < 0:
                raise NegativeWeight(f"{name}: s[{n},{k}] = {w} < 0")
        frozen_rows.append(tuple((k, w) for k, w in cleaned if w != 0))
    frozen_rows = tuple(frozen_rows)

    def generator(n: int) -> WeightVector:
        if n >= len(frozen_rows):
            raise MatrixRowOutOfRange(f"{name}: row {n} requested, matrix has {len(frozen_rows)} rows")
        return WeightVector(n=n, weights=frozen_rows[n])

    return SummationMethod(name=name, kind="custom-matrix", generator=generator)


def interleave(a: SummationMethod, b: SummationMethod) -> SummationMethod:
    """
    Mixed sequence: row(2n-1) = a.row(n), row(2n) = b.row(n), row(0) = a.row(0).
    """
    def generator(n: int) -> WeightVector:
        if n == 0:
            source = a.row(0)
        elif n % 2 == 1:
            source = a.row((n + 1) // 2)
        else:
            source = b.row(n // 2)
        return replace(source, n=n)

    return SummationMethod(name=f"interleave({a.name},{b.name})", kind="interleaved", generator=generator)


def subsequence(
    base: SummationMethod,
    index_map: Callable[[int], int],
    label: Optional[str] = None
) -> SummationMethod:
    """
    Rows of base along a strictly increasing index map: row(n) = base.row(index_map(n)).

    Raises (from row):
        NonIncreasingIndexMap: if index_map(n) <= index_map(n-1) or index_map(n) < 0.
    """
    def generator(n: int) -> WeightVector:
        target = index_map(n)
        if target < 0:
            raise NonIncreasingIndexMap(f"index_map({n}) = {target} < 0")
        if n > 0:
            previous = index_map(n - 1)
            if target <= previous:
                raise NonIncreasingIndexMap(f"index_map({n}) = {target} <= index_map({n - 1}) = {previous}")
        return replace(base.row(target), n=n)

    return SummationMethod(
        name=f"subseq({base.name},{label or 'custom'})",
        kind="subsequence",
        generator=generator
    )


def even_indices(n: int) -> int:
    return 2 * n


def odd_indices(n: int) -> int:
    """0, 1, 3, 5, ...: recovers the first method of an interleave."""
    return max(2 * n - 1, 0)


def geometric_indices(ratio: float) -> Callable[[int], int]:
    """n-th distinct value of ceil(ratio^i), i = 0, 1, ..."""
    if ratio <= 1:
        raise ValueError(f"Geometric ratio must exceed 1, got {ratio}")

    def index_map(n: int) -> int:
        seen = 0
        last = None
        i = 0
        while True:
            value = math.ceil(ratio ** i)
            if value != last:
                if seen == n:
                    return value
                seen += 1
                last = value
            i += 1

    return index_map


def sequence_indices(values: Sequence[int]) -> Callable[[int], int]:
    """Index map read from an explicit list (e.g. loaded from a file)."""
    frozen = tuple(int(v) for v in values)

    def index_map(n: int) -> int:
        if n >= len(frozen):
            raise NonIncreasingIndexMap(f"index map defined for n < {len(frozen)}, got {n}")
        return frozen[n]

    return index_map
