"""
Summation methods

Generalized averaging methods as row-stochastic matrices S = {s_{n,k}}, the
finite-prefix validation of their defining conditions, and spec parsing.
"""

from .methods import (
    WeightVector,
    SummationMethod,
    cesaro,
    riesz,
    harmonic_weights,
    custom_matrix,
    interleave,
    subsequence,
    even_indices,
    odd_indices,
    geometric_indices,
    sequence_indices,
)
from .validation import MethodValidationReport, validate_method, row_variation
from .loader import parse_method_spec
