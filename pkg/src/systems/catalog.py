"""
Concrete semicascades (Omega, phi) with their metrics and observable dictionaries.

Maps are written once against generic arithmetic: rational points stay exact,
float points stay float.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Callable, Optional, Sequence, Union

import numpy as np

from src.utils.config import config
from src.utils.errors import (
    DimensionMismatch,
    InvalidParameter,
    InvalidPoint,
    SingularMatrix,
)
from .observables import (
    Observable,
    PiecewiseLinear,
    character,
    constant_one,
    coordinate,
)
from .points import Number, RationalVec, RealVec, SymbolicPoint, vec, wrap_unit

logger = logging.getLogger(__name__)

Point = Union[RealVec, RationalVec, SymbolicPoint]


@dataclass(frozen=True)
class SystemSpec:
    """A semicascade with its metric and observable dictionary."""
    name: str
    kind: str                      # rotation | torus | interval | shift | projective
    dimension: int                 # coordinates, or alphabet size for the shift
    phi: Callable[[Any], Any]
    metric: Callable[[Any, Any], float]
    dictionary: tuple[Observable, ...]
    check_point: Callable[[Any], None]
    expanding: bool = False        # float iteration destroys orbits; exact by default
    params: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if not self.dictionary:
            raise InvalidParameter(f"{self.name}: dictionary must be nonempty")

    def observable(self, name: str) -> Observable:
        for obs in self.dictionary:
            if obs.name == name:
                return obs
        names = ", ".join(o.name for o in self.dictionary)
        raise InvalidParameter(f"{self.name}: no observable {name!r} (available: {names})")

    def with_observables(self, extra: Sequence[Observable]) -> "SystemSpec":
        """Copy of this system with extra observables appended to the dictionary."""
        taken = {o.name for o in self.dictionary}
        clashes = [o.name for o in extra if o.name in taken]
        if clashes:
            raise InvalidParameter(f"{self.name}: observable names already used: {clashes}")
        return replace(self, dictionary=self.dictionary + tuple(extra))

    @property
    def exact_by_default(self) -> bool:
        """Points are read as rationals: expanding maps and rotations by a rational angle."""
        return self.expanding or isinstance(self.params.get("alpha"), Fraction)


def _check_unit_cube(dimension: int, closed: bool) -> Callable[[Any], None]:
    def check(point) -> None:
        if not isinstance(point, (RealVec, RationalVec)):
            raise InvalidPoint(f"Expected a coordinate vector, got {type(point).__name__}")
        if len(point.coords) != dimension:
            raise DimensionMismatch(f"Expected {dimension} coordinates, got {len(point.coords)}")
        for c in point.coords:
            if c < 0 or c > 1 or (not closed and c >= 1):
                raise InvalidPoint(f"Coordinate {c} outside [0,1{']' if closed else ')'}")
    return check


def torus_distance(p, q) -> float:
    total = 0.0
    for a, b in zip(p.coords, q.coords):
        delta = abs(float(a) - float(b)) % 1.0
        total += min(delta, 1.0 - delta) ** 2
    return math.sqrt(total)


def euclidean_distance(p, q) -> float:
    return float(np.linalg.norm(np.array(p.coords, dtype=float) - np.array(q.coords, dtype=float)))


def _torus_characters(d: int) -> list[Observable]:
    frequencies: list[tuple[int, ...]] = []
    for i in range(d):
        e = [0] * d
        e[i] = 1
        frequencies.append(tuple(e))
        e2 = [0] * d
        e2[i] = 2
        frequencies.append(tuple(e2))
    for i in range(d):
        for j in range(i + 1, d):
            plus = [0] * d
            plus[i], plus[j] = 1, 1
            minus = [0] * d
            minus[i], minus[j] = 1, -1
            frequencies.extend([tuple(plus), tuple(minus)])

    observables = []
    for m in frequencies:
        observables.append(character(m, "cos"))
        observables.append(character(m, "sin"))
    return observables


def rotation(alpha: Number) -> SystemSpec:
    """
    Circle rotation t -> t + alpha mod 1.

    Exact when alpha is a Fraction and the point is rational.
    """
    def phi(p):
        return vec((wrap_unit(p.coords[0] + alpha),))

    dictionary = (
        constant_one(),
        character((1,), "cos", "cos1"),
        character((1,), "sin", "sin1"),
        character((2,), "cos", "cos2"),
        character((2,), "sin", "sin2"),
    )
    return SystemSpec(
        name=f"rotation:alpha={alpha}",
        kind="rotation",
        dimension=1,
        phi=phi,
        metric=torus_distance,
        dictionary=dictionary,
        check_point=_check_unit_cube(1, closed=False),
        params={"alpha": alpha}
    )


def golden_alpha() -> float:
    return (math.sqrt(5.0) - 1.0) / 2.0


def affine_torus(A: Sequence[Sequence[int]], b: Optional[Sequence[Number]] = None) -> SystemSpec:
    """
    Affine torus endomorphism omega -> A omega + b mod 1.

    The dictionary holds the coordinates (rational-valued on rational points,
    used by the exact oracles) followed by characters for frequencies
    e_i, 2e_i, e_i + e_j and e_i - e_j.

    Raises:
        DimensionMismatch: if A is not square or b has the wrong length.
    """
    d = len(A)
    if d < 1 or any(len(row) != d for row in A):
        raise DimensionMismatch(f"Torus matrix must be square, got {[len(r) for r in A]} columns for {d} rows")
    if any(not isinstance(a, int) for row in A for a in row):
        raise InvalidParameter("Torus matrix entries must be integers")
    b = tuple(b) if b is not None else tuple(Fraction(0) for _ in range(d))
    if len(b) != d:
        raise DimensionMismatch(f"Shift b has {len(b)} entries, matrix has dimension {d}")

    matrix = tuple(tuple(row) for row in A)

    def phi(p):
        coords = p.coords
        image = [
            wrap_unit(sum(a * c for a, c in zip(row, coords)) + shift)
            for row, shift in zip(matrix, b)
        ]
        return vec(image)

    names = ["t"] if d == 1 else [f"t{i + 1}" for i in range(d)]
    dictionary = tuple(coordinate(i, names[i]) for i in range(d)) + tuple(_torus_characters(d))
    identity = all(matrix[i][j] == (1 if i == j else 0) for i in range(d) for j in range(d))

    return SystemSpec(
        name=f"torus:A={[list(r) for r in matrix]},b={[str(x) for x in b]}",
        kind="torus",
        dimension=d,
        phi=phi,
        metric=torus_distance,
        dictionary=dictionary,
        check_point=_check_unit_cube(d, closed=False),
        expanding=not identity,
        params={"A": matrix, "b": b}
    )


def doubling() -> SystemSpec:
    """The circle doubling map, affine_torus([[2]])."""
    return affine_torus([[2]])


def _interval_dictionary() -> tuple[Observable, ...]:
    return (
        constant_one(),
        Observable("t", lambda p: p.coords[0], 1.0),
        Observable("t2", lambda p: p.coords[0] * p.coords[0], 1.0),
        Observable("cospi", lambda p: math.cos(math.pi * float(p.coords[0])), 1.0),
    )


def interval_map(
    kind: str,
    r: Optional[Number] = None,
    breakpoints: Optional[Sequence[Sequence[Number]]] = None
) -> SystemSpec:
    """
    Maps of I = [0, 1]: square, logistic (parameter r), tent, custom-piecewise-linear.

    Raises:
        InvalidParameter: on unknown kinds or out-of-range parameters.
    """
    half = Fraction(1, 2)
    expanding = False

    if kind == "square":
        def phi(p):
            t = p.coords[0]
            return vec((t * t,))
    elif kind == "logistic":
        if r is None or not 0 <= r <= 4:
            raise InvalidParameter(f"Logistic parameter r must lie in [0, 4], got {r}")

        def phi(p):
            t = p.coords[0]
            return vec((r * t * (1 - t),))
    elif kind == "tent":
        expanding = True

        def phi(p):
            t = p.coords[0]
            return vec((2 * t if t <= half else 2 * (1 - t),))
    elif kind == "custom-piecewise-linear":
        if breakpoints is None:
            raise InvalidParameter("custom-piecewise-linear needs breakpoints")
        pl = PiecewiseLinear(breakpoints)
        if pl.ts[0] != 0 or pl.ts[-1] != 1 or any(y < 0 or y > 1 for y in pl.ys):
            raise InvalidParameter("Piecewise-linear map must be defined on [0,1] with values in [0,1]")
        expanding = pl.exact

        def phi(p):
            return vec((pl(p.coords[0]),))
    else:
        raise InvalidParameter(f"Unknown interval map {kind!r}")

    label = kind if r is None else f"{kind}:r={r}"
    return SystemSpec(
        name=f"interval:{label}",
        kind="interval",
        dimension=1,
        phi=phi,
        metric=euclidean_distance,
        dictionary=_interval_dictionary(),
        check_point=_check_unit_cube(1, closed=True),
        expanding=expanding,
        params={"map": kind, "r": r}
    )


def shift_distance(p: SymbolicPoint, q: SymbolicPoint) -> float:
    """rho(p, q) = 1 / (1 + first index where they differ); 0 when equal."""
    if p == q:
        return 0.0
    horizon = p.comparison_horizon(q, config.numerics.symbolic_horizon)
    for k in range(horizon):
        if p.symbol(k) != q.symbol(k):
            return 1.0 / (1 + k)
    return 0.0


def _check_symbolic(point) -> None:
    if not isinstance(point, SymbolicPoint):
        raise InvalidPoint(f"Shift points must be SymbolicPoint, got {type(point).__name__}")


def bernoulli_shift() -> SystemSpec:
    """Left shift on {0,1}^N0."""
    dictionary = (
        Observable("x0", lambda p: p.symbol(0), 1.0),
        Observable("x1", lambda p: p.symbol(1), 1.0),
        Observable("x0x1", lambda p: p.symbol(0) * p.symbol(1), 1.0),
        Observable("cyl0", lambda p: 1 - p.symbol(0), 1.0),
        Observable("cyl1", lambda p: p.symbol(0), 1.0),
        Observable("cyl01", lambda p: (1 - p.symbol(0)) * p.symbol(1), 1.0),
    )
    return SystemSpec(
        name="shift",
        kind="shift",
        dimension=2,
        phi=lambda p: p.shifted(),
        metric=shift_distance,
        dictionary=dictionary,
        check_point=_check_symbolic,
        expanding=True
    )


def projective_action(T: Sequence[Sequence[float]]) -> SystemSpec:
    """
    Projective action v -> Tv / |Tv| on the sphere S^{n-1}.

    Raises:
        DimensionMismatch: if T is not square or n < 2.
        SingularMatrix: if T is not invertible.
    """
    matrix = np.array(T, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionMismatch(f"Projective matrix must be square, got shape {matrix.shape}")
    n = matrix.shape[0]
    if n < 2:
        raise DimensionMismatch(f"Projective action needs n >= 2, got {n}")
    if np.linalg.matrix_rank(matrix) < n:
        raise SingularMatrix(f"Matrix is singular: det = {np.linalg.det(matrix)}")

    def phi(p):
        w = matrix @ np.array(p.coords, dtype=float)
        w = w / np.linalg.norm(w)
        w = w / np.linalg.norm(w)
        return RealVec(tuple(float(c) for c in w))

    def check(point) -> None:
        if not isinstance(point, RealVec) or len(point.coords) != n:
            raise InvalidPoint(f"Expected a float vector of length {n}")
        norm = float(np.linalg.norm(point.coords))
        if abs(norm - 1.0) > 1e-12:
            raise InvalidPoint(f"Sphere point has norm {norm}")

    dictionary = [coordinate(i, f"v{i + 1}") for i in range(n)]
    for i in range(n):
        for j in range(i, n):
            dictionary.append(
                Observable(f"v{i + 1}v{j + 1}", lambda p, i=i, j=j: p.coords[i] * p.coords[j], 1.0)
            )

    return SystemSpec(
        name=f"projective:n={n}",
        kind="projective",
        dimension=n,
        phi=phi,
        metric=euclidean_distance,
        dictionary=tuple(dictionary),
        check_point=check,
        params={"T": matrix.tolist()}
    )


def unit_vector(coords: Sequence[float]) -> RealVec:
    """Normalise a nonzero vector onto the sphere."""
    v = np.array(coords, dtype=float)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise InvalidPoint("Zero vector has no direction")
    return RealVec(tuple(float(c) for c in v / norm))
