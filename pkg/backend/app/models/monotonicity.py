"""
Local monotonicity data models
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from app.core.exceptions import DimensionMismatchError, UsageError
from app.models.game import SimpleGame
from app.models.index import IndexId


def parse_fraction(text) -> Fraction:
    """Exact rational from '3/4', '0.75', 2 or a Fraction"""
    try:
        return Fraction(str(text).strip()) if not isinstance(text, (int, Fraction)) else Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not an exact rational: {text!r}") from exc


@dataclass(frozen=True)
class ConvexWeights:
    """Multipliers α in the simplex, one per index of the collection"""
    alphas: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(parse_fraction(a) for a in self.alphas))
        if not self.alphas:
            raise DimensionMismatchError("alpha must have at least one entry")
        if any(a < 0 for a in self.alphas):
            raise UsageError(f"alpha entries must be non-negative: {self}")
        if sum(self.alphas) != 1:
            raise UsageError(f"alpha entries must sum to 1, got {sum(self.alphas)}")

    @classmethod
    def unit(cls, r: int, position: int = 0) -> "ConvexWeights":
        return cls(tuple(Fraction(1 if h == position else 0) for h in range(r)))

    @classmethod
    def parse(cls, text: str) -> "ConvexWeights":
        return cls(tuple(parse_fraction(part) for part in text.split(",")))

    @property
    def r(self) -> int:
        return len(self.alphas)

    def __str__(self) -> str:
        return ",".join(str(a) for a in self.alphas)


IndexCollection = Tuple[IndexId, ...]


def parse_collection(text: str) -> IndexCollection:
    try:
        return tuple(IndexId.parse(part) for part in text.split(","))
    except ValueError as exc:
        raise UsageError(f"unknown index in {text!r}; choose from bz, pgi, s, jo, dp, sdp") from exc


@dataclass(frozen=True)
class LmCheckResult:
    satisfied: bool
    violating_pair: Optional[Tuple[int, int]] = None
    margin: Fraction = Fraction(0)  # P_{i+1} - P_i at the first violation


@dataclass(frozen=True)
class Violation:
    pair: Tuple[int, int]
    margin: Fraction


@dataclass
class CostResult:
    """Cost with the game and adjacent pair that attain it"""
    value: Fraction
    witness_game: Optional[SimpleGame]
    witness_pair: Optional[Tuple[int, int]]
    witness_threshold: Fraction
    collection: IndexCollection = ()
    games_scanned: int = 0
    pair_costs: Dict[IndexId, "CostResult"] = field(default_factory=dict)


@dataclass(frozen=True)
class IterationStep:
    """One round of the iterative cost algorithm"""
    alpha1: Fraction
    violation: Fraction
    witness_key: str
    witness_pair: Tuple[int, int]
    next_alpha1: Fraction


@dataclass(frozen=True)
class PropertyOutcome:
    holds: bool
    components_hold: bool
    counterexample: Optional[str] = None

    @property
    def preserved(self) -> bool:
        """A property all components share must survive the combination"""
        return self.holds or not self.components_hold


@dataclass
class PropertyReport:
    collection: IndexCollection
    alpha: ConvexWeights
    games_checked: int
    outcomes: Dict[str, PropertyOutcome]

    @property
    def all_preserved(self) -> bool:
        return all(outcome.preserved for outcome in self.outcomes.values())

    def failures(self) -> List[str]:
        return [name for name, outcome in self.outcomes.items() if not outcome.preserved]


def check_dimensions(collection: Sequence[IndexId], alpha: ConvexWeights):
    if len(collection) != alpha.r:
        raise DimensionMismatchError(f"{alpha.r} multipliers for {len(collection)} indices")
