"""
Tameness of Affine Torus Maps

omega -> A omega + b on T^d is tame exactly when A^k = A^l for some k != l.
The powers of an integer matrix are eventually periodic only if
A^d = A^{d + L(d)}, where L(d) is the lcm of every m with phi(m) <= d, so one
comparison of two big-integer powers decides the question.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Optional, Sequence

import sympy

from src.utils.config import config
from src.utils.errors import InvalidParameter, NonSquareMatrix

logger = logging.getLogger(__name__)

IntMatrix = tuple[tuple[int, ...], ...]


@lru_cache(maxsize=None)
def totient_lcm_bound(d: int) -> int:
    """
    L(d) = lcm{m >= 1 : phi(m) <= d}.

    phi(m) >= sqrt(m / 2), so every such m is at most 2 d^2.
    """
    if d < 1:
        raise InvalidParameter(f"Dimension must be >= 1, got {d}")
    orders = [m for m in range(1, 2 * d * d + 1) if sympy.totient(m) <= d]
    return math.lcm(*orders)


def as_int_matrix(A: Sequence[Sequence[Any]]) -> IntMatrix:
    """
    Validate and freeze a square integer matrix.

    Raises:
        NonSquareMatrix: if A is empty or not square.
        InvalidParameter: if an entry is not an integer.
    """
    rows = [list(row) for row in A]
    d = len(rows)
    if d == 0 or any(len(row) != d for row in rows):
        raise NonSquareMatrix(f"Expected a square matrix, got row lengths {[len(r) for r in rows]}")

    frozen = []
    for row in rows:
        entries = []
        for value in row:
            if isinstance(value, bool):
                raise InvalidParameter(f"Matrix entry {value!r} is not an integer")
            if isinstance(value, Fraction) and value.denominator == 1:
                value = value.numerator
            if isinstance(value, float) and value.is_integer():
                value = int(value)
            if not isinstance(value, int):
                raise InvalidParameter(f"Matrix entry {value!r} is not an integer")
            entries.append(value)
        frozen.append(tuple(entries))
    return tuple(frozen)


def identity(d: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(d)) for i in range(d))


def matrix_mul(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    columns = list(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in columns) for row in A)


def matrix_power(A: IntMatrix, e: int) -> IntMatrix:
    """A^e by binary powering on Python integers (no overflow)."""
    if e < 0:
        raise InvalidParameter(f"Exponent must be nonnegative, got {e}")
    result = identity(len(A))
    base = A
    while e:
        if e & 1:
            result = matrix_mul(result, base)
        e >>= 1
        if e:
            base = matrix_mul(base, base)
    return result


@dataclass
class TamenessCertificate:
    """Verdict for one affine torus map with its verifiable witness."""
    A: IntMatrix
    verdict: str                         # "tame" | "untame"
    witness: Optional[tuple[int, int]]   # (k, l) with A^k = A^l, k < l
    d: int
    L: int
    det: int
    automorphism: bool
    b: Optional[tuple] = None
    notes: list[str] = field(default_factory=list)

    @property
    def tame(self) -> bool:
        return self.verdict == "tame"

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "witness": list(self.witness) if self.witness else None,
            "d": self.d,
            "L": self.L,
            "det": self.det,
            "automorphism": self.automorphism,
            "matrix": [list(row) for row in self.A],
            "shift": list(self.b) if self.b is not None else None,
            "notes": self.notes,
        }


def _first_repeat(A: IntMatrix, limit: int) -> Optional[tuple[int, int]]:
    """Scan A^0..A^limit for the first power equal to an earlier one."""
    seen: dict[IntMatrix, int] = {}
    current = identity(len(A))
    for l in range(limit + 1):
        if current in seen:
            return seen[current], l
        seen[current] = l
        current = matrix_mul(current, A)
    return None


def decide_tame(A: Sequence[Sequence[Any]], b: Optional[Sequence[Any]] = None) -> TamenessCertificate:
    """
    Decide tameness of omega -> A omega + b.

    Algorithm:
    1. L = totient_lcm_bound(d).
    2. Compare A^d with A^{d+L} by binary powering.
    3. If equal, scan A^0..A^{d+L} for the first repeat and verify it.

    Args:
        A: Square integer matrix
        b: Translation part; recorded but irrelevant to the verdict

    Returns:
        TamenessCertificate

    Raises:
        NonSquareMatrix: if A is not square.
    """
    A = as_int_matrix(A)
    d = len(A)
    if d > config.tameness.max_dimension:
        logger.warning(f"d = {d} exceeds {config.tameness.max_dimension}; L(d) powers may be slow")
    L = totient_lcm_bound(d)

    A_d = matrix_power(A, d)
    A_dL = matrix_mul(A_d, matrix_power(A, L))
    det = int(sympy.Matrix(A).det())

    notes = []
    if b is not None:
        notes.append("shift b is recorded only; the verdict depends on A alone")

    witness = None
    if A_d == A_dL:
        verdict = "tame"
        witness = _first_repeat(A, d + L)
        if witness is None or matrix_power(A, witness[0]) != matrix_power(A, witness[1]):
            raise ArithmeticError(f"Witness verification failed for {A}")
    else:
        verdict = "untame"
        notes.append(f"A^{d + L} != A^{d} (d={d}, L={L})")

    logger.info(f"{d}x{d} matrix: {verdict}, witness={witness}, det={det}")
    return TamenessCertificate(
        A=A,
        verdict=verdict,
        witness=witness,
        d=d,
        L=L,
        det=det,
        automorphism=abs(det) == 1,
        b=tuple(b) if b is not None else None,
        notes=notes
    )


def brute_force_tame(A: Sequence[Sequence[Any]]) -> bool:
    """
    Hash successive powers until the first repeat or exponent d + L(d) + 1.

    Multiplies with sympy so it shares no arithmetic with decide_tame.
    """
    M = sympy.Matrix(as_int_matrix(A))
    d = M.shape[0]
    limit = d + totient_lcm_bound(d) + 1
    seen = set()
    power = sympy.eye(d)
    for _ in range(limit + 1):
        key = tuple(int(v) for v in power)
        if key in seen:
            return True
        seen.add(key)
        power = power * M
    return False
