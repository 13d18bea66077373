"""
Enumeration data models
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from app.models.game import WeightedRepresentation


class GameFilter(str, Enum):
    PROPER = "proper"
    STRONG = "strong"
    CONSTANT_SUM = "constant-sum"
    UNIFORM = "uniform"
    FLAT = "flat"


class Universe(str, Enum):
    COMPLETE = "complete"
    WEIGHTED = "weighted"


@dataclass(frozen=True)
class WeightednessCertificate:
    """Gap-normalized representation, or None when the game is not weighted"""
    representation: Optional[WeightedRepresentation]

    @property
    def feasible(self) -> bool:
        return self.representation is not None


@dataclass(frozen=True)
class CountRow:
    n: int
    complete: int
    weighted: int
    uniform_complete: int
    uniform_weighted: int
