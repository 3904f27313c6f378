"""
Error types shared by all ergolab modules.

Every domain failure derives from ErgolabError so the CLI can map it to exit
code 1 and report the class name; UsageError marks bad flags or specs (exit 2).
"""


class ErgolabError(Exception):
    """Base class for domain errors."""


class UsageError(Exception):
    """Malformed command line, spec string or scenario id."""


# summation

class NonMonotoneWeights(ErgolabError):
    """Riesz weights increased somewhere (p_{n+1} > p_n)."""


class NonPositiveWeight(ErgolabError):
    """Riesz weight p_n <= 0."""


class NegativeWeight(ErgolabError):
    """Summation matrix entry s_{n,k} < 0."""


class MatrixRowOutOfRange(ErgolabError):
    """A custom matrix was asked for a row it does not define."""


class NonIncreasingIndexMap(ErgolabError):
    """Subsequence index map is not strictly increasing."""


# systems

class DimensionMismatch(ErgolabError):
    pass


class InvalidParameter(ErgolabError):
    pass


class InvalidPoint(ErgolabError):
    """Point outside the phase space or with the wrong representation."""


class SingularMatrix(ErgolabError):
    pass


class RationalOverflow(ErgolabError):
    """Exact orbit denominators exceeded the configured bit bound."""


# averaging

class TooFewCheckpoints(ErgolabError):
    pass


# tameness

class NonSquareMatrix(ErgolabError):
    pass


class LpInfeasible(ErgolabError):
    """Flatness LP reported infeasible; it is feasible by construction."""


class LpNumericalFailure(ErgolabError):
    pass
