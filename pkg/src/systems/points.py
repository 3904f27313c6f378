"""
Phase-point representations.

RealVec holds float coordinates, RationalVec exact Fraction coordinates, and
SymbolicPoint a binary sequence described either as preperiod + period words
or as a named generator rule read lazily from an offset.
"""

import bisect
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from src.utils.errors import InvalidPoint

Number = Union[Fraction, float, int]


@dataclass(frozen=True)
class RealVec:
    """Fixed-dimension float coordinates."""
    coords: tuple[float, ...]

    exact = False

    @property
    def t(self) -> float:
        return self.coords[0]


@dataclass(frozen=True)
class RationalVec:
    """Exact rational coordinates (Fractions are always in lowest terms)."""
    coords: tuple[Fraction, ...]

    exact = True

    def __post_init__(self):
        if not all(isinstance(c, Fraction) for c in self.coords):
            raise InvalidPoint(f"RationalVec needs Fraction coordinates, got {self.coords}")

    @property
    def t(self) -> Fraction:
        return self.coords[0]


def vec(coords: Sequence[Number]) -> Union[RealVec, RationalVec]:
    """RationalVec when every coordinate is rational, else RealVec."""
    if all(isinstance(c, (Fraction, int)) for c in coords):
        return RationalVec(tuple(Fraction(c) for c in coords))
    return RealVec(tuple(float(c) for c in coords))


def wrap_unit(value: Number) -> Number:
    """Reduce modulo 1 into [0, 1)."""
    reduced = value % 1
    if isinstance(reduced, float) and reduced >= 1.0:
        return 0.0
    return reduced


class BlockRule:
    """
    Blocks of equal symbols: block j >= 1 holds symbol (j mod 2) repeated base^j times.

    Block end positions are memoized and extended on demand under a lock, so
    concurrent readers see a consistent prefix.
    """

    def __init__(self, base: int):
        if base < 2:
            raise ValueError(f"Block base must be >= 2, got {base}")
        self.base = base
        self.name = f"blocks{base}"
        self._ends: list[int] = []  # _ends[j-1] = N_j = base + base^2 + ... + base^j
        self._lock = threading.Lock()

    def boundary(self, j: int) -> int:
        """N_j: number of symbols in blocks 1..j."""
        if j <= 0:
            return 0
        self._extend_to_block(j)
        return self._ends[j - 1]

    def _extend_to_block(self, j: int) -> None:
        with self._lock:
            while len(self._ends) < j:
                previous = self._ends[-1] if self._ends else 0
                self._ends.append(previous + self.base ** (len(self._ends) + 1))

    def _extend_past(self, position: int) -> None:
        with self._lock:
            while not self._ends or self._ends[-1] <= position:
                previous = self._ends[-1] if self._ends else 0
                self._ends.append(previous + self.base ** (len(self._ends) + 1))

    def symbol(self, position: int) -> int:
        self._extend_past(position)
        j = bisect.bisect_right(self._ends, position) + 1
        return j % 2


SEQUENCE_RULES: dict[str, BlockRule] = {"blocks4": BlockRule(4)}


def get_rule(name: str) -> BlockRule:
    if name not in SEQUENCE_RULES:
        if name.startswith("blocks") and name[len("blocks"):].isdigit():
            SEQUENCE_RULES[name] = BlockRule(int(name[len("blocks"):]))
        else:
            raise InvalidPoint(f"Unknown sequence rule {name!r}")
    return SEQUENCE_RULES[name]


def _primitive_root(word: str) -> str:
    """Shortest u with word = u^m."""
    n = len(word)
    for size in range(1, n + 1):
        if n % size == 0 and word[:size] * (n // size) == word:
            return word[:size]
    return word


@dataclass(frozen=True)
class SymbolicPoint:
    """
    A point of {0,1}^N0.

    Eventually periodic points are kept in canonical form (primitive period,
    shortest preperiod) so that equal sequences compare equal. Rule points are
    the rule's sequence read from position `offset` on.
    """
    preperiod: str = ""
    period: str = "0"
    rule: Optional[str] = None
    offset: int = 0

    exact = True

    def __post_init__(self):
        if self.rule is not None:
            get_rule(self.rule)
            if self.offset < 0:
                raise InvalidPoint(f"Rule offset must be nonnegative, got {self.offset}")
            object.__setattr__(self, "preperiod", "")
            object.__setattr__(self, "period", "")
            return

        if not self.period:
            raise InvalidPoint("Symbolic period must be nonempty")
        if set(self.preperiod + self.period) - {"0", "1"}:
            raise InvalidPoint(f"Symbols must be 0/1: pre={self.preperiod!r}, per={self.period!r}")

        pre, per = self.preperiod, _primitive_root(self.period)
        while pre and pre[-1] == per[-1]:
            pre, per = pre[:-1], per[-1] + per[:-1]
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    @property
    def eventually_periodic(self) -> bool:
        return self.rule is None

    def symbol(self, i: int) -> int:
        if self.rule is not None:
            return get_rule(self.rule).symbol(self.offset + i)
        if i < len(self.preperiod):
            return int(self.preperiod[i])
        return int(self.period[(i - len(self.preperiod)) % len(self.period)])

    def shifted(self) -> "SymbolicPoint":
        """Left shift by one position."""
        if self.rule is not None:
            return SymbolicPoint(rule=self.rule, offset=self.offset + 1)
        if self.preperiod:
            return SymbolicPoint(self.preperiod[1:], self.period)
        return SymbolicPoint("", self.period[1:] + self.period[0])

    def comparison_horizon(self, other: "SymbolicPoint", default: int) -> int:
        """Positions that decide equality of two eventually periodic points."""
        if self.eventually_periodic and other.eventually_periodic:
            return max(len(self.preperiod), len(other.preperiod)) + math.lcm(len(self.period), len(other.period))
        return default
