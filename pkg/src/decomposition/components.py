"""
Quasi-ergodic components: clustering of limit measures, separation of the
representatives by the dictionary, and invariance checks on measures.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Sequence

import numpy as np
from scipy.cluster.hierarchy import fcluster, linkage

from src.averaging.measures import EmpiricalMeasure
from src.systems.catalog import SystemSpec
from src.systems.observables import Observable
from src.systems.orbit import is_exact
from src.utils.config import config
from .distance import MeasureDistance

logger = logging.getLogger(__name__)


@dataclass
class SeparationReport:
    """Which dictionary observable tells each pair of representatives apart."""
    pairs: list[dict] = field(default_factory=list)
    tolerance: float = 0.0
    passed: bool = True

    def to_dict(self) -> dict:
        return {"pairs": self.pairs, "tolerance": self.tolerance, "pass": self.passed}


def cluster(
    limits: Sequence[tuple[int, EmpiricalMeasure]],
    eps: float,
    distance: MeasureDistance
) -> list[list[int]]:
    """
    Single-linkage clustering of limit measures at threshold eps.

    Args:
        limits: (grid index, limit measure) for converged grid points
        eps: Linkage threshold
        distance: Weak-star pseudo-metric

    Returns:
        Components as sorted lists of grid indices, ordered by their lowest index.
    """
    if not limits:
        return []
    indices = [i for i, _ in limits]
    if len(limits) == 1:
        return [indices]

    embedded = np.vstack([distance.embed(mu) for _, mu in limits])
    tree = linkage(embedded, method="single", metric="cityblock")
    labels = fcluster(tree, t=eps, criterion="distance")

    groups: dict[int, list[int]] = {}
    for index, label in zip(indices, labels):
        groups.setdefault(int(label), []).append(index)
    components = sorted((sorted(members) for members in groups.values()), key=lambda c: c[0])

    logger.info(f"Clustered {len(limits)} limits into {len(components)} components at eps={eps}")
    return components


def separation_check(
    reps: Sequence[EmpiricalMeasure],
    dictionary: Sequence[Observable],
    tolerance: Optional[float] = None
) -> SeparationReport:
    """
    For every pair of representatives, the first dictionary observable whose
    pairings differ by more than tolerance, or None when the dictionary is too
    coarse to tell them apart.
    """
    tolerance = config.decomposition.separation_tolerance if tolerance is None else tolerance
    pairings = [[mu.pair(x) for x in dictionary] for mu in reps]

    pairs = []
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            found = None
            for index, x in enumerate(dictionary):
                gap = abs(pairings[i][index] - pairings[j][index])
                if gap > tolerance:
                    found = {"observable": x.name, "index": index, "gap": gap}
                    break
            pairs.append({"pair": [i, j], "separating": found})

    passed = all(p["separating"] is not None for p in pairs)
    if not passed:
        logger.warning("Dictionary does not separate every pair of representatives")
    return SeparationReport(pairs=pairs, tolerance=tolerance, passed=passed)


def ergodicity_residual(s: SystemSpec, mu: EmpiricalMeasure) -> float:
    """max_x |<x o phi, mu> - <x, mu>| / |x|_inf over the dictionary."""
    images = [(s.phi(p), w) for p, w in mu.atoms]
    pushed = EmpiricalMeasure(tuple(images))
    worst: Any = 0
    for x in s.dictionary:
        gap = abs(pushed.pair(x) - mu.pair(x)) / (x.sup_norm or 1.0)
        if gap > worst:
            worst = gap
    return float(worst)


def certify_cycle_measure(s: SystemSpec, mu: EmpiricalMeasure) -> bool:
    """
    True when mu is a Dirac mass at an exact fixed point, or uniform on one
    exact phi-cycle. These are the only limits labelled ergodic.
    """
    support = mu.support
    if len(support) == 1:
        p = support[0]
        return s.phi(p) == p

    if not all(is_exact(p) for p in support):
        return False
    weights = [w for _, w in mu.atoms]
    if not all(isinstance(w, (Fraction, int)) for w in weights) or len(set(weights)) != 1:
        return False

    members = set(support)
    start = support[0]
    current = start
    visited = {start}
    for step in range(1, len(support) + 1):
        current = s.phi(current)
        if current == start:
            return step == len(support) and visited == members
        if current not in members:
            return False
        visited.add(current)
    return False
