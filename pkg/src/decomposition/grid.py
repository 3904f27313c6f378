"""
Initial-point grids for decomposition sweeps.
"""

import itertools
import logging
from fractions import Fraction
from typing import Any, Optional

import numpy as np

from src.systems.catalog import SystemSpec
from src.systems.loader import parse_point
from src.systems.points import RealVec, SymbolicPoint, vec
from src.utils.errors import InvalidParameter
from src.utils.result_store import ResultStore

logger = logging.getLogger(__name__)


def default_grid(s: SystemSpec, resolution: int) -> list[Any]:
    """
    Uniform lattice of starting points.

    interval: k/G, k = 0..G; circle/torus: k/G, k = 0..G-1 in each coordinate;
    shift: the 2^G periodic points with period words of length G; sphere:
    normalised lattice points of the cube [-1, 1]^n. Coordinates are rational
    when the system is exact.
    """
    if resolution < 1:
        raise InvalidParameter(f"Grid resolution must be >= 1, got {resolution}")
    G = resolution

    def coordinate(k: int):
        return Fraction(k, G) if s.exact_by_default else k / G

    if s.kind == "interval":
        return [vec((coordinate(k),)) for k in range(G + 1)]

    if s.kind in ("rotation", "torus"):
        axes = [[coordinate(k) for k in range(G)] for _ in range(s.dimension)]
        return [vec(c) for c in itertools.product(*axes)]

    if s.kind == "shift":
        return [SymbolicPoint("", "".join(bits)) for bits in itertools.product("01", repeat=G)]

    if s.kind == "projective":
        n = s.dimension
        if n == 2:
            angles = [2 * np.pi * k / G for k in range(G)]
            return [RealVec((float(np.cos(a)), float(np.sin(a)))) for a in angles]
        ticks = np.linspace(-1.0, 1.0, G + 1)
        seen: dict[tuple, RealVec] = {}
        for corner in itertools.product(ticks, repeat=n):
            v = np.array(corner)
            norm = np.linalg.norm(v)
            if norm == 0:
                continue
            unit = tuple(float(c) for c in v / norm)
            seen.setdefault(unit, RealVec(unit))
        return [seen[key] for key in sorted(seen)]

    raise InvalidParameter(f"No default grid for system kind {s.kind!r}")


def load_grid(s: SystemSpec, spec: str, store: Optional[ResultStore] = None, allow_float: bool = False) -> list[Any]:
    """
    Grid from a CLI value: an integer resolution, or a JSON file holding a list
    of point strings (or {"points": [...]}).
    """
    if spec.isdigit():
        return default_grid(s, int(spec))
    store = store or ResultStore()
    data = store.load_json(spec)
    entries = data.get("points") if isinstance(data, dict) else data
    if not isinstance(entries, list) or not entries:
        raise InvalidParameter(f"Grid file {spec} must hold a non-empty list of points")
    grid = [parse_point(s, str(entry), allow_float=allow_float) for entry in entries]
    logger.info(f"Loaded {len(grid)} grid points from {spec}")
    return grid
