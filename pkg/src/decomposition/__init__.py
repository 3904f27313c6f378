"""
Decomposition

Psi map over initial-point grids, weak-star clustering of limit measures into
quasi-ergodic components, and separation/invariance checks.
"""

from .distance import MeasureDistance
from .grid import default_grid, load_grid
from .components import (
    SeparationReport,
    cluster,
    separation_check,
    ergodicity_residual,
    certify_cycle_measure,
)
from .psi import (
    Component,
    DecompositionReport,
    psi_map,
    decompose,
    bi_invariance_check,
    ergodic_coverage_check,
)
