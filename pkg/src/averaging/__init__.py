"""
Averaging

Weighted ergodic averages along orbits, empirical measures V_n delta_omega,
checkpoint traces with invariance residuals, and convergence verdicts.
"""

from .measures import EmpiricalMeasure, describe_point, weighted_sum
from .averages import (
    AverageTrace,
    geometric_checkpoints,
    weighted_average,
    empirical_measure,
    trace,
)
from .convergence import ConvergenceVerdict, detect_convergence
