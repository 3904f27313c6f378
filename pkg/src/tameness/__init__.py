"""
Tameness

Exact tameness decision for affine torus maps, the l1-flatness check and the
periodic-point obstruction for interval maps.
"""

from .matrix_power import (
    TamenessCertificate,
    as_int_matrix,
    totient_lcm_bound,
    matrix_mul,
    matrix_power,
    decide_tame,
    brute_force_tame,
)
from .flatness import (
    FlatnessResult,
    shifted_values,
    flatness_matrix,
    flatness_lp,
    cylinder_grid,
    brute_force_flatness,
)
from .obstruction import ObstructionReport, periodic_point_obstruction
