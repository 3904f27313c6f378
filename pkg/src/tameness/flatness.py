"""
l1-Flatness Check

For one observable x, one subsequence of shifts n(0..K-1) and one finite grid,
computes

    v* = min { max_i |sum_k a_k x(phi^{n(k)} omega_i)| : sum_k |a_k| = 1 }.

The constraint sum |a_k| = 1 is not convex, so the minimum is taken over the
sign orthants: for each sign pattern (first sign fixed to +, the objective is
even in a) one linear program in b = |a| on the simplex. A small v* is
evidence of flatness; a large v* on the full cylinder grid rules flatness out
for that observable and subsequence.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np
from scipy.optimize import linprog

from src.systems.catalog import SystemSpec
from src.systems.observables import Observable
from src.systems.orbit import iterate
from src.systems.points import SymbolicPoint
from src.utils.config import config
from src.utils.errors import InvalidParameter, LpInfeasible, LpNumericalFailure

logger = logging.getLogger(__name__)


@dataclass
class FlatnessResult:
    """Optimum of the flatness program and the coefficients achieving it."""
    observable: str
    shifts: list[int]
    grid_size: int
    value: float
    coefficients: list[float]
    solves: int = 0
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "observable": self.observable,
            "shifts": self.shifts,
            "grid_size": self.grid_size,
            "value": self.value,
            "coefficients": self.coefficients,
            "lp_solves": self.solves,
            "notes": self.notes,
        }


def shifted_values(s: SystemSpec, x: Observable, shifts: Sequence[int], grid: Sequence[Any]) -> np.ndarray:
    """Matrix M[i, k] = x(phi^{n(k)} omega_i)."""
    horizon = max(shifts)
    rows = []
    for omega in grid:
        orbit = iterate(s, omega, horizon)
        rows.append([float(x(orbit.points[n])) for n in shifts])
    return np.array(rows, dtype=float)


def _solve_orthant(M: np.ndarray, signs: np.ndarray) -> tuple[float, np.ndarray]:
    """min t s.t. |M diag(signs) b| <= t, sum b = 1, b >= 0."""
    G, K = M.shape
    signed = M * signs
    # variables: b_0..b_{K-1}, t
    c = np.zeros(K + 1)
    c[-1] = 1.0
    A_ub = np.vstack([
        np.hstack([signed, -np.ones((G, 1))]),
        np.hstack([-signed, -np.ones((G, 1))]),
    ])
    b_ub = np.zeros(2 * G)
    A_eq = np.hstack([np.ones((1, K)), np.zeros((1, 1))])
    b_eq = np.array([1.0])
    tolerance = config.numerics.lp_tolerance

    result = linprog(
        c,
        A_ub=A_ub,
        b_ub=b_ub,
        A_eq=A_eq,
        b_eq=b_eq,
        bounds=[(0, None)] * (K + 1),
        method="highs",
        options={"primal_feasibility_tolerance": tolerance, "dual_feasibility_tolerance": tolerance},
    )
    if result.status == 2:
        raise LpInfeasible(f"Flatness LP reported infeasible: {result.message}")
    if result.status != 0:
        raise LpNumericalFailure(f"Flatness LP failed (status {result.status}): {result.message}")

    b = np.clip(result.x[:K], 0.0, None)
    return float(result.x[-1]), signs * (b / b.sum())


def flatness_matrix(M: np.ndarray) -> tuple[float, np.ndarray, int]:
    """
    Minimise max_i |(M a)_i| over sum |a| = 1.

    Returns:
        (value, coefficients, number of LP solves); value is recomputed as the
        grid max of |M a| for the returned coefficients.
    """
    M = np.asarray(M, dtype=float)
    K = M.shape[1]
    best_value, best_a = np.inf, None
    solves = 0
    for tail in itertools.product((1.0, -1.0), repeat=K - 1):
        signs = np.array((1.0,) + tail)
        value, a = _solve_orthant(M, signs)
        solves += 1
        if value < best_value - 1e-15:
            best_value, best_a = value, a
    achieved = float(np.abs(M @ best_a).max())
    return achieved, best_a, solves


def flatness_lp(
    s: SystemSpec,
    x: Observable,
    shifts: Sequence[int],
    grid: Sequence[Any]
) -> FlatnessResult:
    """
    Grid-restricted flatness value of x along the shifts n(0..K-1).

    Args:
        s: System
        x: Observable
        shifts: Nonnegative iteration counts, K >= 2
        grid: Nonempty list of points

    Returns:
        FlatnessResult; value is a lower bound for the sup-norm infimum over
        the whole space for this subsequence.

    Raises:
        InvalidParameter: if K < 2, a shift is negative, or the grid is empty.
        LpInfeasible, LpNumericalFailure: on solver failure.
    """
    shifts = [int(n) for n in shifts]
    if len(shifts) < 2:
        raise InvalidParameter(f"Need at least 2 shifts, got {len(shifts)}")
    if min(shifts) < 0:
        raise InvalidParameter(f"Shifts must be nonnegative: {shifts}")
    if not grid:
        raise InvalidParameter("Grid must be nonempty")

    M = shifted_values(s, x, shifts, grid)
    value, a, solves = flatness_matrix(M)
    logger.info(f"{s.name}/{x.name}: flatness value {value:.3g} over {len(grid)} points, K={len(shifts)}")

    notes = [
        "value is a lower bound for this subsequence; small values are evidence of flatness only",
    ]
    return FlatnessResult(
        observable=x.name,
        shifts=shifts,
        grid_size=len(grid),
        value=value,
        coefficients=[float(c) for c in a],
        solves=solves,
        notes=notes
    )


def cylinder_grid(K: int) -> list[SymbolicPoint]:
    """One point per cylinder of length K: the word followed by zeros."""
    if K < 1:
        raise InvalidParameter(f"Cylinder length must be >= 1, got {K}")
    return [SymbolicPoint("".join(bits), "0") for bits in itertools.product("01", repeat=K)]


def brute_force_flatness(M: np.ndarray, resolution: Optional[int] = None) -> float:
    """
    Dense search over the l1 sphere: every signed coefficient vector whose
    absolute values are multiples of 1/resolution summing to 1.
    """
    resolution = resolution or config.tameness.brute_force_resolution
    M = np.asarray(M, dtype=float)
    K = M.shape[1]
    magnitudes = [
        c for c in itertools.product(range(resolution + 1), repeat=K - 1)
        if sum(c) <= resolution
    ]
    simplex = np.array([list(c) + [resolution - sum(c)] for c in magnitudes], dtype=float) / resolution
    signs = np.array(list(itertools.product((1.0, -1.0), repeat=K)))
    best = np.inf
    for sign in signs:
        values = np.abs((simplex * sign) @ M.T).max(axis=1)
        best = min(best, float(values.min()))
    return best
