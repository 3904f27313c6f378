"""
Finite-prefix checks of the summation-matrix conditions.

Nonnegativity and unit row sums are checked on every row up to max_n. The
vanishing-variation condition is a limit, so the report only records witnesses
v(n) on sampled rows and compares the last one to a caller-supplied threshold.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from tqdm import tqdm

from src.utils.config import config
from .methods import SummationMethod, Weight, WeightVector

logger = logging.getLogger(__name__)


@dataclass
class MethodValidationReport:
    """Result of validate_method."""
    method: str
    max_n: int
    threshold: float
    row_sum_defect: Weight
    min_weight: Weight = Fraction(0)
    rows_checked: int = 0
    variation: dict[int, Weight] = field(default_factory=dict)
    passed: bool = False

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "max_n": self.max_n,
            "threshold": self.threshold,
            "row_sum_defect": self.row_sum_defect,
            "min_weight": self.min_weight,
            "rows_checked": self.rows_checked,
            "variation": {str(n): v for n, v in self.variation.items()},
            "v_max_n": self.variation.get(self.max_n),
            "pass": self.passed,
        }


def row_variation(row: WeightVector) -> Weight:
    """
    v(n) = s_{n,0} + sum_{k>=1} |s_{n,k} - s_{n,k-1}| over the row's index range.
    """
    dense = row.dense()
    terms = [dense[0]] + [abs(dense[k] - dense[k - 1]) for k in range(1, len(dense))]
    if row.exact:
        return sum(terms, Fraction(0))
    return math.fsum(float(t) for t in terms)


def validation_indices(max_n: int, dense_limit: Optional[int] = None, ratio: float = 1.5) -> list[int]:
    """Every n up to dense_limit, then geometric steps, always ending at max_n."""
    dense_limit = config.numerics.validation_dense_limit if dense_limit is None else dense_limit
    indices = list(range(0, min(max_n, dense_limit) + 1))
    n = float(max(indices[-1], 1))
    while True:
        n *= ratio
        step = math.ceil(n)
        if step >= max_n:
            break
        if step > indices[-1]:
            indices.append(step)
    if indices[-1] != max_n:
        indices.append(max_n)
    return indices


def validate_method(
    m: SummationMethod,
    max_n: int,
    threshold: float,
    indices: Optional[Sequence[int]] = None,
    all_rows: bool = True
) -> MethodValidationReport:
    """
    Check rows of m up to max_n.

    Row sums and signs are checked on every row 0..max_n; the variation
    witnesses v(n) only on the sampled indices.

    Args:
        m: Summation method
        max_n: Last row index (>= 1)
        threshold: Bound the final variation v(max_n) must meet
        indices: Rows for the variation witnesses (default: validation_indices(max_n))
        all_rows: If False, row sums are checked on the sampled indices only;
            rows_checked in the report says how many were inspected

    Returns:
        MethodValidationReport; passed = (row_sum_defect <= 1e-12, min_weight >= 0
        and v(max_n) <= threshold).

    Raises:
        ValueError: if max_n < 1. Row-generator errors propagate.
    """
    if max_n < 1:
        raise ValueError(f"max_n must be >= 1, got {max_n}")

    indices = sorted(set(indices)) if indices is not None else validation_indices(max_n)
    if indices[-1] != max_n:
        indices.append(max_n)
    sampled = set(indices)
    rows = range(max_n + 1) if all_rows else indices

    logger.info(f"Validating {m.name}: {len(rows)} rows, variation on {len(indices)} up to n={max_n}")

    defect: Weight = Fraction(0)
    min_weight: Weight = Fraction(0)
    variation: dict[int, Weight] = {}
    for n in tqdm(rows, desc=f"Rows of {m.name}", disable=len(rows) < 1000):
        row = m.row(n)
        row_defect = abs(row.total() - 1)
        if row_defect > defect:
            defect = row_defect
        if row.weights:
            smallest = min(w for _, w in row.weights)
            if smallest < min_weight:
                logger.warning(f"{m.name}: negative weight {float(smallest):.3g} in row {n}")
                min_weight = smallest
        if n in sampled:
            variation[n] = row_variation(row)

    passed = bool(
        defect <= config.numerics.weight_tolerance
        and min_weight >= 0
        and variation[max_n] <= threshold
    )
    if not passed:
        logger.warning(f"{m.name}: row_sum_defect={float(defect):.3g}, v({max_n})={float(variation[max_n]):.3g}")

    return MethodValidationReport(
        method=m.name,
        max_n=max_n,
        threshold=threshold,
        row_sum_defect=defect,
        min_weight=min_weight,
        rows_checked=len(rows),
        variation=variation,
        passed=passed
    )
