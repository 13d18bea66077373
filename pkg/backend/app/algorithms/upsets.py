"""
Up-set enumeration over coalition posets

A complete game with 1 ⊒ 2 ⊒ ... ⊒ n is exactly an up-set of the shift
poset that contains N and misses ∅; a simple game is an up-set of the subset
lattice with the same two conditions. Both are enumerated by one depth-first
search that walks the coalitions in a linear extension (largest first) and
decides win/lose for each, where a coalition may win only if all of its
upper neighbours already won.

Search states are plain tuples of ints so they can be shipped to worker
processes:

    (position, decided, table)

`decided` has bit p set iff the coalition at position p won, `table` has
bit S set iff coalition S won.
"""

from functools import lru_cache
from typing import Iterator, List, Tuple

import numpy as np

from app.models.coalition import grand_mask, players_of, popcount

State = Tuple[int, int, int]


class CoalitionPoset:
    """Coalitions of n players in a linear extension, with upper-neighbour masks"""

    def __init__(self, n: int):
        self.n = n
        self.order: List[int] = sorted(range(1 << n), key=self._sort_key)
        self.position = {mask: pos for pos, mask in enumerate(self.order)}
        self.upper: List[int] = []
        for mask in self.order:
            bits = 0
            for neighbour in self.upper_neighbours(mask):
                bits |= 1 << self.position[neighbour]
            self.upper.append(bits)

    def _sort_key(self, mask: int):
        return (-popcount(mask), sum(players_of(mask)), mask)

    def upper_neighbours(self, mask: int) -> List[int]:
        return [mask | (1 << p) for p in range(self.n) if not mask & (1 << p)]

    def start(self) -> State:
        """The grand coalition always wins"""
        return (1, 1, 1 << grand_mask(self.n))

    def table_to_array(self, table: int) -> np.ndarray:
        size = 1 << self.n
        raw = np.frombuffer(table.to_bytes((size + 7) // 8, "little"), dtype=np.uint8)
        return np.unpackbits(raw, bitorder="little")[:size].astype(bool)


class SubsetLattice(CoalitionPoset):
    """Inclusion order: monotone boolean functions"""


class ShiftPoset(CoalitionPoset):
    """Inclusion plus replacing a member by the next stronger player"""

    def upper_neighbours(self, mask: int) -> List[int]:
        neighbours = super().upper_neighbours(mask)
        for p in range(1, self.n):
            if mask & (1 << p) and not mask & (1 << (p - 1)):
                neighbours.append(mask ^ (1 << p) ^ (1 << (p - 1)))
        return neighbours

    @staticmethod
    def dominates(t: int, s: int) -> bool:
        """T ⪰ S: |T| >= |S| and the j-th smallest member of T is at most that of S"""
        tp = players_of(t)
        sp = players_of(s)
        if len(tp) < len(sp):
            return False
        return all(a <= b for a, b in zip(tp, sp))


@lru_cache(maxsize=None)
def shift_poset(n: int) -> ShiftPoset:
    return ShiftPoset(n)


@lru_cache(maxsize=None)
def subset_lattice(n: int) -> SubsetLattice:
    return SubsetLattice(n)


def _advance(poset: CoalitionPoset, state: State) -> Tuple[State, bool]:
    """Skip forced losses; returns the next branching state or a finished one"""
    position, decided, table = state
    last = len(poset.order) - 1  # the empty coalition
    upper = poset.upper
    while position < last and (decided & upper[position]) != upper[position]:
        position += 1
    return (position, decided, table), position >= last


def _children(poset: CoalitionPoset, state: State) -> Tuple[State, State]:
    position, decided, table = state
    mask = poset.order[position]
    win = (position + 1, decided | (1 << position), table | (1 << mask))
    lose = (position + 1, decided, table)
    return win, lose


def iter_upsets(poset: CoalitionPoset, state: State = None) -> Iterator[int]:
    """Winning tables (as ints) of every up-set below a search state, in DFS order"""
    stack = [state if state is not None else poset.start()]
    while stack:
        current, finished = _advance(poset, stack.pop())
        if finished:
            yield current[2]
            continue
        win, lose = _children(poset, current)
        stack.append(lose)
        stack.append(win)


def split_states(poset: CoalitionPoset, depth: int) -> List[State]:
    """Search states after `depth` branching decisions, in DFS order"""
    frontier = [poset.start()]
    for _ in range(depth):
        expanded = []
        for state in frontier:
            current, finished = _advance(poset, state)
            if finished:
                expanded.append(current)
            else:
                expanded.extend(_children(poset, current))
        frontier = expanded
    return frontier
