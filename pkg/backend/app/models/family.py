"""
Witness family data models
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

from app.models.game import WeightedRepresentation
from app.models.index import IndexId


@dataclass(frozen=True)
class PredictedValue:
    index_id: IndexId
    player: int
    value: Fraction


@dataclass(frozen=True)
class FamilyInstance:
    """A weighted game with closed-form (or printed) index values and the bound it certifies

    `pair` is i of the designated adjacent pair (i, i+1) and `collection` the
    (P¹, P^h) pair whose threshold gives `predicted_bound`.
    """
    family_id: str
    parameters: Tuple[Tuple[str, int], ...]
    representation: WeightedRepresentation
    collection: Tuple[IndexId, IndexId]
    pair: int
    predicted: Tuple[PredictedValue, ...]
    predicted_bound: Optional[Fraction]
    game_class: str = "weighted"
    exact: bool = True
    disputed: bool = False
    note: str = ""

    @property
    def n(self) -> int:
        return self.representation.n

    @property
    def label(self) -> str:
        return str(self.representation)

    def parameter_text(self) -> str:
        return ",".join(f"{name}={value}" for name, value in self.parameters)


@dataclass(frozen=True)
class VerificationRow:
    family_id: str
    game: str
    index_id: IndexId
    player: int
    predicted: Fraction
    computed: Fraction
    disputed: bool

    @property
    def match(self) -> bool:
        return self.predicted == self.computed


@dataclass
class VerificationReport:
    instance: FamilyInstance
    rows: List[VerificationRow] = field(default_factory=list)
    computed_bound: Optional[Fraction] = None
    class_holds: bool = True

    @property
    def bound_match(self) -> bool:
        return self.instance.predicted_bound is None or self.instance.predicted_bound == self.computed_bound

    @property
    def passed(self) -> bool:
        """Disputed entries are reported but never fail"""
        if self.instance.disputed:
            return self.class_holds
        return self.class_holds and self.bound_match and all(row.match for row in self.rows)
