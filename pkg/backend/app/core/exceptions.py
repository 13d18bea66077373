"""
Exception hierarchy for the toolkit

Library code raises these; only the CLI converts them to exit codes.
"""

from typing import Optional, Tuple


class LmCostError(Exception):
    """Base class for every toolkit error"""
    exit_code = 1


# Game definition errors

class GameDefinitionError(LmCostError):
    """The game data does not describe a valid simple game"""


class MalformedGameError(GameDefinitionError):
    """Unparseable bracket notation or game record"""


class EmptyFamilyError(GameDefinitionError):
    """Minimal winning family is empty"""


class NotAntichainError(GameDefinitionError):
    """Minimal winning family has nested members"""

    def __init__(self, message: str, pair: Optional[Tuple[int, int]] = None):
        super().__init__(message)
        self.pair = pair


class PlayerOutOfRangeError(GameDefinitionError):
    """A player or coalition lies outside {1..n}"""


class GrandCoalitionLosingError(GameDefinitionError):
    """The grand coalition must win"""


class NonMonotoneError(GameDefinitionError):
    """Winning table is not monotone or has a winning empty coalition"""


class InvalidRepresentationError(GameDefinitionError):
    """Quota or weights violate the weighted representation rules"""


# Structural errors

class GameNotCompleteError(LmCostError):
    """Desirability is not total, or players are not sorted by it"""

    def __init__(self, message: str, pair: Optional[Tuple[int, int]] = None):
        super().__init__(message)
        self.pair = pair


class NotNullPlayerError(LmCostError):
    """drop_null called on a player that belongs to a minimal winning coalition"""


class ZeroIndexSumError(LmCostError):
    """Normalization of an all-zero index vector"""


class DimensionMismatchError(LmCostError):
    """Alpha length does not match the index collection"""


class IndexNotLmError(LmCostError):
    """The first index of a cost collection must satisfy local monotonicity"""


class EmptyGameSourceError(LmCostError):
    """A cost or oracle scan received no games"""


class UnsupportedDimensionError(LmCostError):
    """Polyhedron computations support two or three indices"""


class RepresentationMismatchError(LmCostError):
    """A weighted representation does not induce the given game"""


class EnumerationLimitError(LmCostError):
    """Requested player count is outside the enumeration range"""


class SolutionFormatError(LmCostError):
    """Solver output could not be read back into a game"""


class FamilyParameterError(LmCostError):
    """Witness family parameters outside their valid range"""


# Usage errors

class UsageError(LmCostError):
    """Inconsistent or missing command-line options"""
    exit_code = 2
