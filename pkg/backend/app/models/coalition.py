"""
Coalition encoding

A coalition of an n-player game is an int whose bit i-1 is set iff player i
belongs to it. Players are 1-based everywhere in the public API; bit
positions are 0-based. This module is the only place that converts between
the two.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Tuple

import numpy as np

from app.core.exceptions import PlayerOutOfRangeError


def bit(player: int) -> int:
    """Mask of a single 1-based player"""
    return 1 << (player - 1)


def grand_mask(n: int) -> int:
    return (1 << n) - 1


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def players_of(mask: int) -> List[int]:
    """1-based players of a mask, ascending"""
    players = []
    player = 1
    while mask:
        if mask & 1:
            players.append(player)
        mask >>= 1
        player += 1
    return players


def mask_of(players: Iterable[int], n: int) -> int:
    """Mask of 1-based players, validated against {1..n}"""
    mask = 0
    for player in players:
        if not 1 <= player <= n:
            raise PlayerOutOfRangeError(f"player {player} outside 1..{n}")
        mask |= bit(player)
    return mask


@lru_cache(maxsize=None)
def membership_table(n: int) -> np.ndarray:
    """Boolean (n, 2^n) table: row p says whether player p+1 is in each coalition"""
    indices = np.arange(1 << n, dtype=np.int64)
    table = np.stack([((indices >> p) & 1).astype(bool) for p in range(n)]) if n else np.zeros((0, 1), dtype=bool)
    table.setflags(write=False)
    return table


@lru_cache(maxsize=None)
def size_table(n: int) -> np.ndarray:
    """Cardinality of every coalition"""
    sizes = membership_table(n).sum(axis=0).astype(np.int64)
    sizes.setflags(write=False)
    return sizes


@lru_cache(maxsize=None)
def coalition_indices(n: int) -> np.ndarray:
    indices = np.arange(1 << n, dtype=np.int64)
    indices.setflags(write=False)
    return indices


@dataclass(frozen=True)
class Coalition:
    """A coalition together with the size of its player set"""
    n: int
    bits: int

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.n:
            raise PlayerOutOfRangeError(f"coalition mask {self.bits} has bits above player {self.n}")

    @classmethod
    def of(cls, n: int, players: Iterable[int]) -> "Coalition":
        return cls(n, mask_of(players, n))

    @property
    def size(self) -> int:
        return popcount(self.bits)

    @property
    def players(self) -> Tuple[int, ...]:
        return tuple(players_of(self.bits))

    def __contains__(self, player: int) -> bool:
        return bool(self.bits & bit(player))

    def complement(self) -> "Coalition":
        return Coalition(self.n, grand_mask(self.n) ^ self.bits)

    def __str__(self) -> str:
        return "{" + ",".join(str(p) for p in self.players) + "}"
