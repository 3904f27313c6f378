"""
Decomposition Sweep

Maps every grid point omega to its asymptotic distribution mu_omega, clusters
the converged limits into quasi-ergodic components and checks the components
against the dictionary and the dynamics.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

from src.averaging.averages import geometric_checkpoints, trace
from src.averaging.convergence import ConvergenceVerdict, detect_convergence
from src.averaging.measures import EmpiricalMeasure, describe_point
from src.summation.methods import SummationMethod
from src.systems.catalog import SystemSpec
from src.utils.config import config
from src.utils.errors import InvalidParameter
from src.utils.parallel import parallel_map
from .components import (
    SeparationReport,
    certify_cycle_measure,
    cluster,
    ergodicity_residual,
    separation_check,
)
from .distance import MeasureDistance

logger = logging.getLogger(__name__)


@dataclass
class Component:
    """One cluster of grid points sharing a limit measure up to eps."""
    members: list[int]
    representative: EmpiricalMeasure
    representative_index: int
    diameter: float
    residual: float
    certified_ergodic: bool = False

    @property
    def label(self) -> str:
        return "ergodic" if self.certified_ergodic else "quasi-ergodic (empirical)"


@dataclass
class DecompositionReport:
    """Verdicts per grid point and, after clustering, the components."""
    system: SystemSpec = field(repr=False)
    method: str
    n: int
    grid: list[Any]
    limits: list[ConvergenceVerdict]
    eps: Optional[float] = None
    components: list[Component] = field(default_factory=list)
    separation: Optional[SeparationReport] = None

    @property
    def decided(self) -> list[int]:
        return [i for i, v in enumerate(self.limits) if v.status == "converged"]

    @property
    def undecided(self) -> list[int]:
        return [i for i, v in enumerate(self.limits) if v.status != "converged"]

    @property
    def representatives(self) -> list[EmpiricalMeasure]:
        return [c.representative for c in self.components]

    def component_of(self, index: int) -> Optional[int]:
        for label, component in enumerate(self.components):
            if index in component.members:
                return label
        return None

    def to_dict(self) -> dict:
        dictionary = self.system.dictionary
        return {
            "system": self.system.name,
            "method": self.method,
            "n": self.n,
            "eps": self.eps,
            "grid": [describe_point(p) for p in self.grid],
            "verdicts": [
                {"status": v.status, "cauchy_gap": v.cauchy_gap, "residual": v.residual}
                for v in self.limits
            ],
            "undecided": [
                {"index": i, "status": self.limits[i].status} for i in self.undecided
            ],
            "components": [
                {
                    "members": c.members,
                    "label": c.label,
                    "representative_index": c.representative_index,
                    "diameter": c.diameter,
                    "ergodicity_residual": c.residual,
                    "pairings": {x.name: c.representative.pair(x) for x in dictionary},
                    "representative": c.representative.to_dict(),
                }
                for c in self.components
            ],
            "separation": self.separation.to_dict() if self.separation is not None else None,
        }


def psi_map(
    s: SystemSpec,
    m: SummationMethod,
    grid: Sequence[Any],
    n: int,
    tol: Optional[float] = None,
    sep: Optional[float] = None,
    checkpoints: Optional[Sequence[int]] = None,
    max_workers: Optional[int] = None
) -> DecompositionReport:
    """
    Convergence verdict of the averages from every grid point.

    Args:
        s: System
        m: Summation method
        grid: Initial points
        n: Final checkpoint
        tol, sep: Convergence thresholds (default: from config)
        checkpoints: Explicit checkpoints (default: geometric up to n)
        max_workers: Pool size (default: from config)

    Returns:
        DecompositionReport with limits only (no components yet).
    """
    if not grid:
        raise InvalidParameter("Grid must be nonempty")
    checkpoints = list(checkpoints) if checkpoints is not None else geometric_checkpoints(n)
    if checkpoints[-1] != n:
        raise InvalidParameter(f"Last checkpoint {checkpoints[-1]} must equal n = {n}")

    def verdict_at(omega: Any) -> ConvergenceVerdict:
        return detect_convergence(trace(s, m, omega, checkpoints), tol=tol, sep=sep)

    logger.info(f"Sweeping {len(grid)} grid points of {s.name} with {m.name} up to n={n}")
    limits = parallel_map(verdict_at, list(grid), desc=f"psi {s.name}", max_workers=max_workers)

    report = DecompositionReport(system=s, method=m.name, n=n, grid=list(grid), limits=limits)
    logger.info(f"{len(report.decided)} converged, {len(report.undecided)} undecided")
    return report


def decompose(
    s: SystemSpec,
    m: SummationMethod,
    grid: Sequence[Any],
    n: int,
    eps: Optional[float] = None,
    tol: Optional[float] = None,
    sep: Optional[float] = None,
    checkpoints: Optional[Sequence[int]] = None,
    max_workers: Optional[int] = None
) -> DecompositionReport:
    """
    Full pipeline: psi_map, single-linkage clustering of converged limits,
    representatives, residuals and the separation check.

    The representative of a component is the limit of its lowest-index member.
    Single linkage can chain, so each component's diameter is recorded and a
    warning is logged when it exceeds eps.
    """
    eps = config.decomposition.eps if eps is None else eps
    report = psi_map(s, m, grid, n, tol=tol, sep=sep, checkpoints=checkpoints, max_workers=max_workers)
    report.eps = eps

    distance = MeasureDistance(s.dictionary)
    limits = [(i, report.limits[i].limit) for i in report.decided]
    for members in cluster(limits, eps, distance):
        measures = [report.limits[i].limit for i in members]
        diameter = float(distance.matrix(measures).max())
        if diameter > eps:
            logger.warning(f"Component starting at grid index {members[0]} has diameter {diameter:.3g} > eps")
        representative = measures[0]
        report.components.append(Component(
            members=members,
            representative=representative,
            representative_index=members[0],
            diameter=diameter,
            residual=ergodicity_residual(s, representative),
            certified_ergodic=certify_cycle_measure(s, representative),
        ))

    if report.components:
        report.separation = separation_check(report.representatives, s.dictionary)
    logger.info(f"{s.name}: {len(report.components)} components at eps={eps}")
    return report


def _nearest(distance: MeasureDistance, mu: EmpiricalMeasure, measures: Sequence[EmpiricalMeasure]) -> tuple[int, float]:
    gaps = [distance(mu, nu) for nu in measures]
    best = int(np.argmin(gaps))
    return best, gaps[best]


def bi_invariance_check(
    s: SystemSpec,
    m: SummationMethod,
    report: DecompositionReport,
    tol: Optional[float] = None,
    sep: Optional[float] = None,
    checkpoints: Optional[Sequence[int]] = None
) -> dict:
    """
    For every decided grid point omega, compute the limit of phi(omega)
    independently and check that its nearest decided limit lies in omega's
    component.

    Returns:
        {"checks": [...], "pass": bool}; images without a converged verdict are
        listed and do not count toward pass.
    """
    if not report.components:
        raise InvalidParameter("Report has no components; run decompose first")
    checkpoints = list(checkpoints) if checkpoints is not None else geometric_checkpoints(report.n)
    distance = MeasureDistance(s.dictionary)
    decided = report.decided
    decided_limits = [report.limits[i].limit for i in decided]

    def check(index: int) -> dict:
        image = s.phi(report.grid[index])
        verdict = detect_convergence(trace(s, m, image, checkpoints), tol=tol, sep=sep)
        entry = {"index": index, "status": verdict.status, "component": report.component_of(index)}
        if verdict.status != "converged":
            entry["image_component"] = None
            entry["co_clustered"] = None
            return entry
        nearest, gap = _nearest(distance, verdict.limit, decided_limits)
        entry["image_component"] = report.component_of(decided[nearest])
        entry["distance"] = gap
        entry["co_clustered"] = gap <= report.eps and entry["image_component"] == entry["component"]
        return entry

    checks = parallel_map(check, decided, desc=f"bi-invariance {s.name}")
    passed = all(c["co_clustered"] for c in checks if c["co_clustered"] is not None)
    if not passed:
        logger.warning(f"{s.name}: some images leave their component")
    return {"checks": checks, "pass": passed}


def ergodic_coverage_check(
    report: DecompositionReport,
    known: Sequence[tuple[str, EmpiricalMeasure]],
    eps: Optional[float] = None
) -> dict:
    """
    For each known ergodic measure, the nearest computed limit and whether it
    lies within eps.
    """
    eps = report.eps if eps is None else eps
    if eps is None:
        eps = config.decomposition.eps
    distance = MeasureDistance(report.system.dictionary)
    decided = report.decided
    measures = [report.limits[i].limit for i in decided]

    entries = []
    for label, mu in known:
        if not measures:
            entries.append({"measure": label, "nearest_index": None, "distance": None, "covered": False})
            continue
        nearest, gap = _nearest(distance, mu, measures)
        entries.append({
            "measure": label,
            "nearest_index": decided[nearest],
            "distance": gap,
            "covered": gap <= eps,
        })
    return {"entries": entries, "eps": eps, "pass": all(e["covered"] for e in entries)}
