"""
LM polyhedron data models
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from app.models.game import SimpleGame
from app.models.index import IndexId

Vertex = Tuple[Fraction, ...]


@dataclass(frozen=True)
class Certificate:
    """A game and the adjacent pair (i, i+1) whose index differences give a halfspace"""
    game: SimpleGame
    pair: int

    def sort_key(self) -> Tuple[str, int]:
        return (self.game.key(), self.pair)


@dataclass(frozen=True)
class Halfspace:
    """α·d >= 0 with d_h = P^h_i - P^h_{i+1} on the certificate"""
    d: Tuple[Fraction, ...]
    certificate: Optional[Certificate] = None

    def value(self, alpha: Sequence[Fraction]) -> Fraction:
        return sum((a * x for a, x in zip(alpha, self.d)), Fraction(0))

    def normalized(self) -> Tuple[Fraction, ...]:
        """Direction up to positive scaling"""
        scale = max(abs(x) for x in self.d)
        if scale == 0:
            return self.d
        return tuple(x / scale for x in self.d)

    @property
    def trivial(self) -> bool:
        """Implied by α >= 0"""
        return all(x >= 0 for x in self.d)


@dataclass(frozen=True)
class OracleViolation:
    value: Fraction  # max of -α·d, positive
    halfspace: Halfspace


@dataclass
class LmPolyhedron:
    collection: Tuple[IndexId, ...]
    vertices: List[Vertex]
    halfspaces: List[Halfspace] = field(default_factory=list)
    n: Optional[int] = None

    @property
    def r(self) -> int:
        return len(self.collection)

    def contains(self, alpha: Sequence[Fraction]) -> bool:
        if any(a < 0 for a in alpha) or sum(alpha) != 1:
            return False
        return all(h.value(alpha) >= 0 for h in self.halfspaces)


@dataclass(frozen=True)
class LazyTraceStep:
    """A failed vertex check and the cut it produced"""
    round: int
    vertex: Vertex
    certificate: Certificate
    d: Tuple[Fraction, ...]
    violation: Fraction
    vertices_after: Tuple[Vertex, ...]
