"""
Game service
Construction of simple games and their structural predicates: desirability,
completeness, minimal and shift-minimal winning coalitions, classification,
null players and equivalence classes.
"""

import logging
import math
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np

from app.core.exceptions import (
    EmptyFamilyError,
    GameNotCompleteError,
    NotAntichainError,
    NotNullPlayerError,
    PlayerOutOfRangeError,
)
from app.models.coalition import (
    Coalition,
    bit,
    coalition_indices,
    grand_mask,
    mask_of,
    membership_table,
    players_of,
    size_table,
)
from app.models.game import (
    CompletenessResult,
    GameClassification,
    LayerProfile,
    SimpleGame,
    WeightedRepresentation,
)

logger = logging.getLogger(__name__)

CoalitionLike = Union[Coalition, int, Iterable[int]]


def _as_mask(coalition: CoalitionLike, n: int) -> int:
    if isinstance(coalition, Coalition):
        if coalition.n != n:
            raise PlayerOutOfRangeError(f"coalition built for {coalition.n} players, game has {n}")
        return coalition.bits
    if isinstance(coalition, (int, np.integer)):
        mask = int(coalition)
        if mask < 0 or mask >> n:
            raise PlayerOutOfRangeError(f"coalition mask {mask} outside {n} players")
        return mask
    return mask_of(coalition, n)


def _check_player(v: SimpleGame, player: int):
    if not 1 <= player <= v.n:
        raise PlayerOutOfRangeError(f"player {player} outside 1..{v.n}")


# Construction

def game_from_table(n: int, winning: Sequence[bool]) -> SimpleGame:
    """Validated game from an explicit winning table"""
    return SimpleGame(n, np.asarray(winning, dtype=bool))


def game_from_minimal_winning(n: int, family: Iterable[CoalitionLike]) -> SimpleGame:
    """Up-closure of an antichain of coalitions"""
    masks = sorted({_as_mask(c, n) for c in family})
    if not masks:
        raise EmptyFamilyError("minimal winning family must not be empty")
    if masks[0] == 0:
        raise NotAntichainError("the empty coalition cannot be winning")
    for a_pos, a in enumerate(masks):
        for b in masks[a_pos + 1:]:
            if a & b == a or a & b == b:
                small, large = (a, b) if a & b == a else (b, a)
                raise NotAntichainError(
                    f"{players_of(small)} is contained in {players_of(large)}: not an antichain",
                    pair=(small, large),
                )
    indices = coalition_indices(n)
    winning = np.zeros(1 << n, dtype=bool)
    for mask in masks:
        winning |= (indices & mask) == mask
    return SimpleGame(n, winning, validate=False)


def game_from_weighted(rep: WeightedRepresentation) -> SimpleGame:
    """Winning iff w(S) >= q, compared exactly"""
    n = rep.n
    scale = math.lcm(rep.quota.denominator, *(w.denominator for w in rep.weights))
    weights = [int(w * scale) for w in rep.weights]
    quota = int(rep.quota * scale)
    members = membership_table(n)
    if sum(weights) < 2 ** 62:
        sums = np.asarray(weights, dtype=np.int64) @ members.astype(np.int64)
    else:
        sums = np.asarray(weights, dtype=object) @ members.astype(object)
    return SimpleGame(n, sums >= quota, validate=False)


# Families

def winning_coalitions(v: SimpleGame) -> Tuple[int, ...]:
    return tuple(int(m) for m in np.flatnonzero(v.winning))


def minimal_mask(v: SimpleGame) -> np.ndarray:
    """Boolean table marking the minimal winning coalitions"""
    def compute():
        members = membership_table(v.n)
        indices = coalition_indices(v.n)
        minimal = v.winning.copy()
        for p in range(v.n):
            inside = members[p]
            minimal[inside & v.winning[indices ^ (1 << p)]] = False
        minimal.setflags(write=False)
        return minimal
    return v.cached("minimal_mask", compute)


def minimal_winning(v: SimpleGame) -> Tuple[int, ...]:
    return v.cached("minimal_winning", lambda: tuple(int(m) for m in np.flatnonzero(minimal_mask(v))))


# Desirability

def desirability_matrix(v: SimpleGame) -> np.ndarray:
    """geq[i][j] is True iff player i+1 is at least as desirable as player j+1"""
    def compute():
        n = v.n
        members = membership_table(n)
        indices = coalition_indices(n)
        geq = np.ones((n, n), dtype=bool)
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                # S with j in S and i not in S: v(S) = 1 must imply v(S - j + i) = 1
                sel = np.flatnonzero(members[j] & ~members[i])
                swapped = sel ^ ((1 << i) | (1 << j))
                geq[i, j] = not np.any(v.winning[sel] & ~v.winning[swapped])
        geq.setflags(write=False)
        return geq
    return v.cached("desirability", compute)


def desirability_geq(v: SimpleGame, i: int, j: int) -> bool:
    _check_player(v, i)
    _check_player(v, j)
    if i == j:
        raise PlayerOutOfRangeError("desirability_geq needs two distinct players")
    return bool(desirability_matrix(v)[i - 1, j - 1])


def strict_dominance(v: SimpleGame) -> np.ndarray:
    geq = desirability_matrix(v)
    return geq & ~geq.T


def is_complete(v: SimpleGame) -> CompletenessResult:
    """Totality of desirability, with a witness order or an incomparable pair"""
    geq = desirability_matrix(v)
    for i in range(v.n):
        for j in range(i + 1, v.n):
            if not geq[i, j] and not geq[j, i]:
                return CompletenessResult(False, counterexample=(i + 1, j + 1))
    dominated = geq.sum(axis=1)
    order = tuple(sorted(range(1, v.n + 1), key=lambda p: (-int(dominated[p - 1]), p)))
    return CompletenessResult(True, order=order)


def ensure_sorted_complete(v: SimpleGame):
    """Require 1 ⊒ 2 ⊒ ... ⊒ n (which makes the game complete)"""
    geq = desirability_matrix(v)
    for i in range(v.n - 1):
        if not geq[i, i + 1]:
            result = is_complete(v)
            if not result.is_complete:
                raise GameNotCompleteError(
                    f"players {result.counterexample} are incomparable: game is not complete",
                    pair=result.counterexample,
                )
            raise GameNotCompleteError(
                f"player {i + 1} does not dominate player {i + 2}: sort players by desirability first",
                pair=(i + 1, i + 2),
            )


def _ensure_complete(v: SimpleGame):
    result = is_complete(v)
    if not result.is_complete:
        raise GameNotCompleteError(
            f"players {result.counterexample} are incomparable: game is not complete",
            pair=result.counterexample,
        )


def shift_minimal_mask(v: SimpleGame) -> np.ndarray:
    """Minimal winning coalitions that lose after any strictly dominated replacement"""
    def compute():
        _ensure_complete(v)
        members = membership_table(v.n)
        indices = coalition_indices(v.n)
        strict = strict_dominance(v)
        base = minimal_mask(v)
        shift = base.copy()
        for i in range(v.n):
            for j in range(v.n):
                if not strict[i, j]:
                    continue
                sel = base & members[i] & ~members[j]
                swapped = indices ^ ((1 << i) | (1 << j))
                shift[sel & v.winning[swapped]] = False
        shift.setflags(write=False)
        return shift
    return v.cached("shift_minimal_mask", compute)


def shift_minimal_winning(v: SimpleGame) -> Tuple[int, ...]:
    return v.cached("shift_minimal", lambda: tuple(int(m) for m in np.flatnonzero(shift_minimal_mask(v))))


def shift_maximal_losing(v: SimpleGame) -> Tuple[int, ...]:
    """Losing coalitions whose shift-order upper neighbours all win (sorted complete games)"""
    def compute():
        ensure_sorted_complete(v)
        members = membership_table(v.n)
        indices = coalition_indices(v.n)
        candidate = ~v.winning
        for p in range(v.n):
            candidate = candidate & ~(~members[p] & ~v.winning[indices | (1 << p)])
        for p in range(1, v.n):
            # replace player p+1 by the next stronger player p
            movable = members[p] & ~members[p - 1]
            candidate = candidate & ~(movable & ~v.winning[indices ^ ((1 << p) | (1 << (p - 1)))])
        return tuple(int(m) for m in np.flatnonzero(candidate))
    return v.cached("shift_maximal_losing", compute)


# Classification

def layer_profile(v: SimpleGame) -> LayerProfile:
    def compute():
        minimal = minimal_mask(v)
        members = membership_table(v.n)
        sizes = size_table(v.n)
        counts = []
        for p in range(v.n):
            per_size = np.bincount(sizes[minimal & members[p]], minlength=v.n + 1)
            counts.append(tuple(int(c) for c in per_size[1:v.n + 1]))
        return LayerProfile(tuple(counts))
    return v.cached("layer_profile", compute)


def is_flat(v: SimpleGame) -> bool:
    layers = layer_profile(v)
    for i in range(1, v.n + 1):
        for j in range(i + 1, v.n + 1):
            if not layers.layer_geq(i, j) and not layers.layer_geq(j, i):
                return False
    return True


def classify(v: SimpleGame) -> GameClassification:
    def compute():
        indices = coalition_indices(v.n)
        complements = v.winning[v.grand ^ indices]
        proper = not np.any(v.winning & complements)
        strong = not np.any(~v.winning & ~complements)
        sizes = size_table(v.n)[minimal_mask(v)]
        uniform = bool(np.all(sizes == sizes[0]))
        return GameClassification(
            proper=bool(proper),
            strong=bool(strong),
            constant_sum=bool(proper and strong),
            uniform=uniform,
            flat=is_flat(v),
            layers=layer_profile(v),
        )
    return v.cached("classification", compute)


def dp_difference_decomposition(v: SimpleGame, i: int, j: int) -> List[Fraction]:
    """Addends of DP_i - DP_j written over prefix sums of the layer profile"""
    _check_player(v, i)
    _check_player(v, j)
    layers = layer_profile(v)
    prefix_i = layers.prefix_sums(i)
    prefix_j = layers.prefix_sums(j)
    addends = []
    for size in range(1, v.n):
        step = Fraction(1, size) - Fraction(1, size + 1)
        addends.append(step * (prefix_i[size - 1] - prefix_j[size - 1]))
    addends.append(Fraction(prefix_i[-1] - prefix_j[-1], v.n))
    return addends


# Players

def null_players(v: SimpleGame) -> frozenset:
    union = 0
    for mask in minimal_winning(v):
        union |= mask
    return frozenset(p for p in range(1, v.n + 1) if not union & bit(p))


def equivalence_classes(v: SimpleGame) -> Tuple[Tuple[int, ...], ...]:
    """Classes of mutually desirable players, each ascending, ordered by first member"""
    geq = desirability_matrix(v)
    classes: List[List[int]] = []
    for p in range(1, v.n + 1):
        for group in classes:
            q = group[0]
            if geq[p - 1, q - 1] and geq[q - 1, p - 1]:
                group.append(p)
                break
        else:
            classes.append([p])
    return tuple(tuple(group) for group in classes)


def drop_null(v: SimpleGame, player: int) -> SimpleGame:
    """(n-1)-player restriction to N - {player}, players above it shift down"""
    _check_player(v, player)
    if player not in null_players(v):
        raise NotNullPlayerError(f"player {player} is not a null player")
    if v.n == 1:
        raise NotNullPlayerError("a one-player game has no null player to drop")
    low = bit(player) - 1
    reduced = coalition_indices(v.n - 1)
    original = (reduced & low) | ((reduced >> (player - 1)) << player)
    return SimpleGame(v.n - 1, v.winning[original], validate=False)


def add_null_player(v: SimpleGame) -> SimpleGame:
    """Append player n+1 as a null player"""
    extended = coalition_indices(v.n + 1)
    return SimpleGame(v.n + 1, v.winning[extended & v.grand], validate=False)


def permute_players(v: SimpleGame, order: Sequence[int]) -> SimpleGame:
    """New player k is old player order[k-1]"""
    if sorted(order) != list(range(1, v.n + 1)):
        raise PlayerOutOfRangeError(f"{tuple(order)} is not a permutation of 1..{v.n}")
    members = membership_table(v.n)
    original = np.zeros(1 << v.n, dtype=np.int64)
    for new_pos, old_player in enumerate(order):
        original |= members[new_pos].astype(np.int64) << (old_player - 1)
    return SimpleGame(v.n, v.winning[original], validate=False)


def sort_by_desirability(v: SimpleGame) -> Tuple[SimpleGame, Tuple[int, ...]]:
    """Relabel a complete game so that 1 ⊒ 2 ⊒ ... ⊒ n"""
    result = is_complete(v)
    if not result.is_complete:
        raise GameNotCompleteError(
            f"players {result.counterexample} are incomparable: game is not complete",
            pair=result.counterexample,
        )
    if result.order == tuple(range(1, v.n + 1)):
        return v, result.order
    return permute_players(v, result.order), result.order


def game_key(v: SimpleGame) -> str:
    return v.key()


def describe_minimal_winning(v: SimpleGame) -> List[List[int]]:
    """Minimal winning family as ascending player lists, sorted"""
    return sorted(players_of(m) for m in minimal_winning(v))
