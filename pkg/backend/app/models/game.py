"""
Simple game data models

A SimpleGame stores the full winning table over all 2^n coalitions as a
read-only boolean array. Derived families (minimal winning, desirability,
index vectors, ...) are computed by the services and memoized on the game
through `cached`, which is write-once under a per-game lock.
"""

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from app.core.exceptions import (
    GrandCoalitionLosingError,
    InvalidRepresentationError,
    NonMonotoneError,
    PlayerOutOfRangeError,
)
from app.core.config import settings
from app.models.coalition import grand_mask, membership_table, players_of


class SimpleGame:
    """Monotone boolean function on the coalitions of {1..n}"""

    __slots__ = ("n", "winning", "_cache", "_lock")

    def __init__(self, n: int, winning: np.ndarray, validate: bool = True):
        if not 1 <= n <= settings.MAX_PLAYERS:
            raise PlayerOutOfRangeError(f"player count {n} outside 1..{settings.MAX_PLAYERS}")
        table = np.asarray(winning, dtype=bool)
        if table.shape != (1 << n,):
            raise NonMonotoneError(f"winning table must have {1 << n} entries, got {table.shape}")
        table = table.copy()
        table.setflags(write=False)
        self.n = n
        self.winning = table
        self._cache: Dict[str, Any] = {}
        self._lock = threading.RLock()
        if validate:
            self._validate()

    def _validate(self):
        if self.winning[0]:
            raise NonMonotoneError("the empty coalition must lose")
        if not self.winning[grand_mask(self.n)]:
            raise GrandCoalitionLosingError("the grand coalition must win")
        members = membership_table(self.n)
        for p in range(self.n):
            # adding player p+1 never turns a winning coalition losing
            without = ~members[p]
            if np.any(self.winning[without] & ~self.winning[np.flatnonzero(without) | (1 << p)]):
                raise NonMonotoneError(f"adding player {p + 1} turns a winning coalition losing")

    @property
    def grand(self) -> int:
        return grand_mask(self.n)

    def is_winning(self, mask: int) -> bool:
        return bool(self.winning[mask])

    def cached(self, key: str, compute: Callable[[], Any]) -> Any:
        """Memoize a derived value; compute runs at most once per key"""
        value = self._cache.get(key)
        if value is not None:
            return value
        with self._lock:
            value = self._cache.get(key)
            if value is None:
                value = compute()
                self._cache[key] = value
        return value

    def key(self) -> str:
        """Canonical serialization used for deterministic tie-breaking"""
        return self.cached("key", lambda: f"{self.n:02d}:" + np.packbits(self.winning, bitorder="little").tobytes().hex())

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimpleGame):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.winning, other.winning))

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"SimpleGame(n={self.n}, winning={int(self.winning.sum())} coalitions)"

    # Caches and locks stay out of pickles sent to worker processes
    def __getstate__(self):
        return {"n": self.n, "winning": self.winning}

    def __setstate__(self, state):
        self.n = state["n"]
        self.winning = state["winning"]
        self._cache = {}
        self._lock = threading.RLock()


@dataclass(frozen=True)
class WeightedRepresentation:
    """Quota and weights [q; w1, ..., wn] in exact rationals"""
    quota: Fraction
    weights: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "quota", Fraction(self.quota))
        object.__setattr__(self, "weights", tuple(Fraction(w) for w in self.weights))
        if self.quota <= 0:
            raise InvalidRepresentationError("quota must be positive")
        if not self.weights:
            raise InvalidRepresentationError("at least one weight is required")
        if any(w < 0 for w in self.weights):
            raise InvalidRepresentationError("weights must be non-negative")
        if sum(self.weights) < self.quota:
            raise GrandCoalitionLosingError(f"total weight {sum(self.weights)} is below the quota {self.quota}")

    @property
    def n(self) -> int:
        return len(self.weights)

    def weight_of(self, mask: int) -> Fraction:
        return sum((self.weights[p - 1] for p in players_of(mask)), Fraction(0))

    def is_integral(self) -> bool:
        return self.quota.denominator == 1 and all(w.denominator == 1 for w in self.weights)

    def __str__(self) -> str:
        return "[" + str(self.quota) + ";" + ",".join(str(w) for w in self.weights) + "]"


@dataclass(frozen=True)
class LayerProfile:
    """counts[i][l-1] = number of minimal winning coalitions of size l containing player i+1"""
    counts: Tuple[Tuple[int, ...], ...]

    def prefix_sums(self, player: int) -> Tuple[int, ...]:
        total = 0
        sums = []
        for count in self.counts[player - 1]:
            total += count
            sums.append(total)
        return tuple(sums)

    def layer_geq(self, i: int, j: int) -> bool:
        """i is at least j in the layer relation"""
        return all(a >= b for a, b in zip(self.prefix_sums(i), self.prefix_sums(j)))


@dataclass(frozen=True)
class CompletenessResult:
    is_complete: bool
    order: Optional[Tuple[int, ...]] = None
    counterexample: Optional[Tuple[int, int]] = None


@dataclass(frozen=True)
class GameClassification:
    proper: bool
    strong: bool
    constant_sum: bool
    uniform: bool
    flat: bool
    layers: LayerProfile = field(repr=False)

    def flags(self) -> List[str]:
        names = ["proper", "strong", "constant_sum", "uniform", "flat"]
        return [name for name in names if getattr(self, name)]
