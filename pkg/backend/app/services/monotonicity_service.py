"""
Local monotonicity service
Convex combinations of raw indices, the per-pair threshold on the first
multiplier, and the cost of local monotonicity over a collection of games.

All games handed to this module are complete with players sorted so that
1 ⊒ 2 ⊒ ... ⊒ n; only adjacent pairs (i, i+1) need to be checked then.
"""

import logging
from fractions import Fraction
from functools import partial
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from app.core.exceptions import (
    EmptyGameSourceError,
    IndexNotLmError,
    PlayerOutOfRangeError,
    UsageError,
)
from app.models.enumeration import GameFilter, Universe
from app.models.game import SimpleGame
from app.models.index import IndexId, IndexVector, LM_INDICES
from app.models.monotonicity import (
    ConvexWeights,
    CostResult,
    IndexCollection,
    IterationStep,
    LmCheckResult,
    PropertyOutcome,
    PropertyReport,
    Violation,
    check_dimensions,
)
from app.services.enumeration_service import collect, list_games
from app.services.game_service import (
    drop_null,
    ensure_sorted_complete,
    equivalence_classes,
    null_players,
)
from app.services.index_service import index_respects_desirability, normalize, raw_index

logger = logging.getLogger(__name__)


def convex_index(v: SimpleGame, collection: Sequence[IndexId], alpha: ConvexWeights) -> IndexVector:
    """P^α = Σ_h α_h P^h, componentwise and exact"""
    check_dimensions(collection, alpha)
    values = combine([raw_index(v, index_id) for index_id in collection], alpha)
    label = "+".join(f"{a}*{index_id.label}" for a, index_id in zip(alpha.alphas, collection) if a)
    return IndexVector(values, None, label=label)


def combine(vectors: Sequence[IndexVector], alpha: ConvexWeights) -> Tuple[Fraction, ...]:
    """Σ α_h x_h componentwise over vectors of one game"""
    n = len(vectors[0].values)
    return tuple(
        sum((a * x.values[p] for a, x in zip(alpha.alphas, vectors)), Fraction(0))
        for p in range(n)
    )


def pair_differences(v: SimpleGame, collection: Sequence[IndexId], i: int) -> Tuple[Fraction, ...]:
    """d_h = P^h_i - P^h_{i+1}; the pair is LM-compatible for α iff α·d >= 0"""
    if not 1 <= i < v.n:
        raise PlayerOutOfRangeError(f"pair index {i} outside 1..{v.n - 1}")
    result = []
    for index_id in collection:
        values = raw_index(v, index_id).values
        result.append(values[i - 1] - values[i])
    return tuple(result)


def threshold_from_differences(delta1: Fraction, delta2: Fraction) -> Fraction:
    """Least β with β·Δ1 - (1-β)·Δ2 >= 0, where Δ1 = P¹_i - P¹_{i+1} and Δ2 = P^h_{i+1} - P^h_i"""
    if delta2 <= 0:
        return Fraction(0)
    if delta1 == 0:
        return Fraction(1)
    return Fraction(delta2) / (delta1 + delta2)


def lm_threshold(v: SimpleGame, i: int, p1: IndexId, ph: IndexId) -> Fraction:
    """Smallest α₁ for which the (P¹, P^h) combination keeps players i, i+1 in order"""
    ensure_sorted_complete(v)
    d1, dh = pair_differences(v, (p1, ph), i)
    return threshold_from_differences(d1, -dh)


def violations(v: SimpleGame, collection: Sequence[IndexId], alpha: ConvexWeights) -> List[Violation]:
    """Adjacent pairs where the combined index increases, with P_{i+1} - P_i"""
    ensure_sorted_complete(v)
    combined = convex_index(v, collection, alpha).values
    found = []
    for i in range(1, v.n):
        margin = combined[i] - combined[i - 1]
        if margin > 0:
            found.append(Violation((i, i + 1), margin))
    return found


def lm_check(v: SimpleGame, collection: Sequence[IndexId], alpha: ConvexWeights) -> LmCheckResult:
    found = violations(v, collection, alpha)
    if not found:
        return LmCheckResult(True)
    first = found[0]
    return LmCheckResult(False, first.pair, first.margin)


def require_lm_first(collection: Sequence[IndexId]):
    if not collection or IndexId(collection[0]) not in LM_INDICES:
        raise IndexNotLmError(
            f"the first index must satisfy local monotonicity (bz or jo), got {collection[0] if collection else None}"
        )


class CostAccumulator:
    """Running maximum of thresholds for every (P¹, P^h) pair of a collection

    Ties between equal thresholds go to the smallest (game key, pair), so the
    result does not depend on the order games arrive in or on how partial
    accumulators are merged.
    """

    def __init__(self, collection: Sequence[IndexId]):
        require_lm_first(collection)
        if len(collection) < 2:
            raise UsageError("a cost needs at least two indices")
        self.collection: IndexCollection = tuple(IndexId(c) for c in collection)
        self.games_scanned = 0
        # h -> (threshold, game key, pair index, game)
        self.best: Dict[IndexId, Optional[Tuple[Fraction, str, int, SimpleGame]]] = {
            h: None for h in self.collection[1:]
        }

    @staticmethod
    def _better(candidate, incumbent) -> bool:
        if incumbent is None:
            return True
        if candidate[0] != incumbent[0]:
            return candidate[0] > incumbent[0]
        return (candidate[1], candidate[2]) < (incumbent[1], incumbent[2])

    def add(self, v: SimpleGame):
        ensure_sorted_complete(v)
        self.games_scanned += 1
        p1 = raw_index(v, self.collection[0]).values
        key = v.key()
        for h in self.collection[1:]:
            ph = raw_index(v, h).values
            for i in range(1, v.n):
                threshold = threshold_from_differences(p1[i - 1] - p1[i], ph[i] - ph[i - 1])
                candidate = (threshold, key, i, v)
                if self._better(candidate, self.best[h]):
                    self.best[h] = candidate

    def merge(self, other: "CostAccumulator") -> "CostAccumulator":
        self.games_scanned += other.games_scanned
        for h, candidate in other.best.items():
            if candidate is not None and self._better(candidate, self.best[h]):
                self.best[h] = candidate
        return self

    def pair_result(self, h: IndexId) -> CostResult:
        best = self.best[IndexId(h)]
        pair_collection = (self.collection[0], IndexId(h))
        if best is None:
            return CostResult(Fraction(0), None, None, Fraction(0), pair_collection, self.games_scanned)
        threshold, _, i, game = best
        return CostResult(threshold, game, (i, i + 1), threshold, pair_collection, self.games_scanned)

    def result(self) -> CostResult:
        if self.games_scanned == 0:
            raise EmptyGameSourceError("no games to compute a cost over")
        pair_costs = {h: self.pair_result(h) for h in self.collection[1:]}
        winner = None
        for h in self.collection[1:]:
            candidate = pair_costs[h]
            if winner is None or candidate.value > winner.value:
                winner = candidate
            elif candidate.value == winner.value and candidate.witness_game is not None and winner.witness_game is not None:
                if (candidate.witness_game.key(), candidate.witness_pair) < (winner.witness_game.key(), winner.witness_pair):
                    winner = candidate
        return CostResult(
            value=winner.value,
            witness_game=winner.witness_game,
            witness_pair=winner.witness_pair,
            witness_threshold=winner.witness_threshold,
            collection=self.collection,
            games_scanned=self.games_scanned,
            pair_costs=pair_costs,
        )


def cost_over_games(games: Iterable[SimpleGame], p1: IndexId, ph: IndexId) -> CostResult:
    """max over games and adjacent pairs of lm_threshold"""
    accumulator = CostAccumulator((p1, ph))
    for v in games:
        accumulator.add(v)
    result = accumulator.result()
    logger.info(f"cost ({IndexId(p1).label},{IndexId(ph).label}) = {result.value} over {result.games_scanned} games")
    return result


def cost_multi(games: Iterable[SimpleGame], collection: Sequence[IndexId]) -> CostResult:
    """Cost of a collection: the largest of its (P¹, P^j) pairwise costs"""
    if len(collection) < 2:
        raise UsageError("cost_multi needs at least two indices")
    accumulator = CostAccumulator(collection)
    for v in games:
        accumulator.add(v)
    return accumulator.result()


def cost_by_iteration(games: Sequence[SimpleGame], p1: IndexId, ph: IndexId) -> Tuple[CostResult, List[IterationStep]]:
    """Raise α₁ from 0 until no game violates

    Each round picks the largest violation of the current combination, then
    moves α₁ to the threshold that repairs it.
    """
    require_lm_first((p1, ph))
    candidates = []
    scanned = 0
    for v in games:
        ensure_sorted_complete(v)
        scanned += 1
        first = raw_index(v, p1).values
        other = raw_index(v, ph).values
        for i in range(1, v.n):
            delta1 = first[i - 1] - first[i]
            delta2 = other[i] - other[i - 1]
            if delta2 > 0:
                candidates.append((delta1, delta2, v.key(), i, v))
    if scanned == 0:
        raise EmptyGameSourceError("no games to compute a cost over")

    alpha1 = Fraction(0)
    trace: List[IterationStep] = []
    witness = None
    while True:
        best = None
        for delta1, delta2, key, i, v in candidates:
            increase = -alpha1 * delta1 + (1 - alpha1) * delta2
            if increase <= 0:
                continue
            if best is None or increase > best[0] or (increase == best[0] and (key, i) < (best[1], best[2])):
                best = (increase, key, i, v, delta1, delta2)
        if best is None:
            break
        increase, key, i, v, delta1, delta2 = best
        next_alpha1 = threshold_from_differences(delta1, delta2)
        trace.append(IterationStep(alpha1, increase, key, (i, i + 1), next_alpha1))
        logger.debug(f"iteration {len(trace)}: alpha1 {alpha1} -> {next_alpha1} via pair {i}")
        alpha1 = next_alpha1
        witness = (v, i)

    collection = (IndexId(p1), IndexId(ph))
    if witness is None:
        return CostResult(Fraction(0), None, None, Fraction(0), collection, scanned), trace
    v, i = witness
    return CostResult(alpha1, v, (i, i + 1), alpha1, collection, scanned), trace


def check_preserved_properties(
    collection: Sequence[IndexId],
    alpha: ConvexWeights,
    games: Iterable[SimpleGame],
) -> PropertyReport:
    """Check on sample games that the combination keeps what all components have"""
    check_dimensions(collection, alpha)
    names = ["symmetry", "null_player", "efficiency", "invariance_for_nulls", "dominance", "local_monotonicity", "positivity"]
    holds = {name: True for name in names}
    components_hold = {name: True for name in names}
    counterexamples: Dict[str, str] = {}
    count = 0

    def record(name: str, combined_ok: bool, parts_ok: bool, v: SimpleGame):
        if not parts_ok:
            components_hold[name] = False
        if not combined_ok:
            holds[name] = False
            counterexamples.setdefault(name, v.key())

    for v in games:
        ensure_sorted_complete(v)
        count += 1
        vectors = [raw_index(v, index_id) for index_id in collection]
        combined = convex_index(v, collection, alpha)

        classes = equivalence_classes(v)

        def symmetric(values) -> bool:
            return all(len({values[p - 1] for p in group}) == 1 for group in classes)

        record("symmetry", symmetric(combined.values), all(symmetric(x.values) for x in vectors), v)

        nulls = null_players(v)
        record(
            "null_player",
            all(combined[p] == 0 for p in nulls),
            all(x[p] == 0 for x in vectors for p in nulls),
            v,
        )

        # efficiency of the combination of the normalized components
        normalized = [normalize(x) for x in vectors]
        efficient = sum(combine(normalized, alpha), Fraction(0)) == 1
        record("efficiency", efficient, all(x.total() == 1 for x in normalized), v)

        invariant = parts_invariant = True
        for p in nulls:
            if v.n == 1:
                continue
            smaller = drop_null(v, p)
            reduced = convex_index(smaller, collection, alpha).values
            invariant = invariant and reduced == combined.values[:p - 1] + combined.values[p:]
            parts_invariant = parts_invariant and all(
                raw_index(smaller, index_id).values == x.values[:p - 1] + x.values[p:]
                for index_id, x in zip(collection, vectors)
            )
        record("invariance_for_nulls", invariant, parts_invariant, v)

        record(
            "dominance",
            index_respects_desirability(v, combined)[0],
            all(index_respects_desirability(v, x)[0] for x in vectors),
            v,
        )

        def monotone(values) -> bool:
            return all(values[i] >= values[i + 1] for i in range(v.n - 1))

        record("local_monotonicity", monotone(combined.values), all(monotone(x.values) for x in vectors), v)

        def positive(values) -> bool:
            return all(values[p - 1] > 0 for p in range(1, v.n + 1) if p not in nulls)

        record("positivity", positive(combined.values), all(positive(x.values) for x in vectors), v)

    outcomes = {
        name: PropertyOutcome(holds[name], components_hold[name], counterexamples.get(name))
        for name in names
    }
    report = PropertyReport(tuple(collection), alpha, count, outcomes)
    if not report.all_preserved:
        logger.warning(f"combination {alpha} lost properties {report.failures()}")
    return report


def cost_for_class(
    n: int,
    collection: Sequence[IndexId],
    universe: Universe = Universe.WEIGHTED,
    filters: Sequence[GameFilter] = (),
    method: str = "direct",
    workers: Optional[int] = None,
    allow_large: bool = False,
) -> Tuple[CostResult, List[IterationStep]]:
    """Cost over every enumerated game of a class

    `direct` merges per-subtree accumulators; `iterative` replays the
    α₁-raising loop over the full game list and needs exactly two indices.
    """
    collection = tuple(IndexId(c) for c in collection)
    if method == "iterative":
        if len(collection) != 2:
            raise UsageError("the iterative cost method takes exactly two indices")
        require_lm_first(collection)
        games = list_games(n, universe, filters, workers, allow_large)
        return cost_by_iteration(games, collection[0], collection[1])
    if method != "direct":
        raise UsageError(f"unknown cost method {method!r}; use direct or iterative")
    accumulator = collect(n, universe, filters, partial(CostAccumulator, collection), workers, allow_large)
    result = accumulator.result()
    logger.info(f"n={n}: cost {result.value} over {result.games_scanned} {Universe(universe).value} games")
    return result, []
