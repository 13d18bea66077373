"""
Power index data models
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Tuple


class IndexId(str, Enum):
    """The six raw power indices"""
    BZ = "bz"    # Banzhaf: swing coalitions
    PGI = "pgi"  # Public Good: minimal winning coalitions
    S = "s"      # Shift: shift-minimal winning coalitions
    JO = "jo"    # Johnston: equal split over decisive members
    DP = "dp"    # Deegan-Packel: 1/|S| over minimal winning
    SDP = "sdp"  # Shift Deegan-Packel: 1/|S| over shift-minimal winning

    @property
    def label(self) -> str:
        return _LABELS[self]

    @classmethod
    def parse(cls, text: str) -> "IndexId":
        return cls(text.strip().lower())


_LABELS = {
    IndexId.BZ: "Bz",
    IndexId.PGI: "PGI",
    IndexId.S: "S",
    IndexId.JO: "Jo",
    IndexId.DP: "DP",
    IndexId.SDP: "SDP",
}

# Indices that satisfy local monotonicity on every weighted game
LM_INDICES = frozenset({IndexId.BZ, IndexId.JO})

# Indices that need a complete game
COMPLETE_ONLY = frozenset({IndexId.S, IndexId.SDP})


@dataclass(frozen=True)
class IndexVector:
    """Per-player exact scores; index_id is None for convex combinations"""
    values: Tuple[Fraction, ...]
    index_id: Optional[IndexId] = None
    normalized: bool = False
    label: Optional[str] = None

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def name(self) -> str:
        if self.label:
            return self.label
        return self.index_id.label if self.index_id else "combined"

    def __getitem__(self, player: int) -> Fraction:
        """1-based access"""
        return self.values[player - 1]

    def total(self) -> Fraction:
        return sum(self.values, Fraction(0))
