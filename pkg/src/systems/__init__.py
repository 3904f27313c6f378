"""
Systems

Concrete semicascades (Omega, phi): point representations, maps, metrics,
observable dictionaries and exact orbit iteration.
"""

from .points import RealVec, RationalVec, SymbolicPoint, BlockRule, get_rule, vec
from .observables import Observable, PiecewiseLinear, load_piecewise_observables
from .catalog import (
    SystemSpec,
    rotation,
    golden_alpha,
    affine_torus,
    doubling,
    interval_map,
    bernoulli_shift,
    projective_action,
    unit_vector,
)
from .orbit import OrbitSegment, iterate, is_exact
from .loader import load_rows, parse_system_spec, parse_point
