"""
Enumeration service
Exhaustive generation of complete simple games (up-sets of the shift poset)
and weighted games (complete games admitting an exact weight certificate),
with class filters, count tables and a brute-force oracle for small n.

Large runs split the search forest into subtrees that are evaluated by a
process pool. Each subtree feeds an accumulator (any object with `add(game)`
and `merge(other)`), and partial accumulators are merged in subtree order,
so results are identical for every worker count.
"""

import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from functools import partial
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from rich.console import Console
from rich.progress import BarColumn, Progress, TextColumn, TimeElapsedColumn

from app.algorithms.simplex import solve_lp
from app.algorithms.upsets import State, iter_upsets, shift_poset, split_states, subset_lattice
from app.core.config import settings
from app.core.exceptions import EnumerationLimitError
from app.models.coalition import players_of
from app.models.enumeration import CountRow, GameFilter, Universe, WeightednessCertificate
from app.models.game import SimpleGame, WeightedRepresentation
from app.services.game_service import (
    classify,
    describe_minimal_winning,
    is_complete,
    shift_maximal_losing,
    shift_minimal_winning,
    sort_by_desirability,
)
from app.services.index_service import raw_banzhaf

logger = logging.getLogger(__name__)

ORACLE_MAX_PLAYERS = 5


def check_enumeration_range(n: int, allow_large: bool = False):
    limit = 8 if allow_large else settings.enumeration_limit
    if not 1 <= n <= limit:
        hint = " (n = 8 needs --allow-large or LMCOST_ENABLE_LARGE_ENUMERATION)" if n == 8 else ""
        raise EnumerationLimitError(f"enumeration supports 1 <= n <= {limit}, got {n}{hint}")


def passes_filters(v: SimpleGame, filters: Sequence[GameFilter]) -> bool:
    if not filters:
        return True
    flags = classify(v)
    for game_filter in filters:
        game_filter = GameFilter(game_filter)
        if game_filter == GameFilter.PROPER and not flags.proper:
            return False
        if game_filter == GameFilter.STRONG and not flags.strong:
            return False
        if game_filter == GameFilter.CONSTANT_SUM and not flags.constant_sum:
            return False
        if game_filter == GameFilter.UNIFORM and not flags.uniform:
            return False
        if game_filter == GameFilter.FLAT and not flags.flat:
            return False
    return True


# Complete games

def iter_complete_games(
    n: int,
    filters: Sequence[GameFilter] = (),
    state: Optional[State] = None,
    allow_large: bool = False,
) -> Iterator[SimpleGame]:
    """Complete games with 1 ⊒ ... ⊒ n, one per isomorphism class"""
    check_enumeration_range(n, allow_large)
    poset = shift_poset(n)
    for table in iter_upsets(poset, state):
        v = SimpleGame(n, poset.table_to_array(table), validate=False)
        if passes_filters(v, filters):
            yield v


def count_complete(n: int, allow_large: bool = False) -> int:
    """Number of complete games without building them"""
    check_enumeration_range(n, allow_large)
    return sum(1 for _ in iter_upsets(shift_poset(n)))


def enumerate_complete(
    n: int,
    filters: Sequence[GameFilter] = (),
    visitor: Optional[Callable[[SimpleGame], None]] = None,
    allow_large: bool = False,
) -> int:
    if visitor is None and not filters:
        count = count_complete(n, allow_large)
    else:
        count = 0
        for v in iter_complete_games(n, filters, allow_large=allow_large):
            count += 1
            if visitor is not None:
                visitor(v)
    logger.info(f"n={n}: {count} complete games (filters: {_filter_names(filters)})")
    return count


# Weightedness

def _weight_system(v: SimpleGame) -> Tuple[List[List[Fraction]], List[Fraction]]:
    """Rows over (w_1..w_n, q): shift-minimal winning >= q, shift-maximal losing <= q-1, sorted weights"""
    n = v.n
    rows: List[List[Fraction]] = []
    rhs: List[Fraction] = []
    for mask in shift_minimal_winning(v):
        row = [Fraction(0)] * (n + 1)
        for p in players_of(mask):
            row[p - 1] = Fraction(1)
        row[n] = Fraction(-1)
        rows.append(row)
        rhs.append(Fraction(0))
    for mask in shift_maximal_losing(v):
        row = [Fraction(0)] * (n + 1)
        for p in players_of(mask):
            row[p - 1] = Fraction(-1)
        row[n] = Fraction(1)
        rows.append(row)
        rhs.append(Fraction(1))
    for p in range(n - 1):
        row = [Fraction(0)] * (n + 1)
        row[p] = Fraction(1)
        row[p + 1] = Fraction(-1)
        rows.append(row)
        rhs.append(Fraction(0))
    return rows, rhs


def _banzhaf_certificate(v: SimpleGame) -> Optional[WeightedRepresentation]:
    """Try raw Banzhaf values as weights before solving an LP"""
    weights = raw_banzhaf(v).values
    lightest_win = min(sum(weights[p - 1] for p in players_of(m)) for m in shift_minimal_winning(v))
    heaviest_loss = max(sum((weights[p - 1] for p in players_of(m)), Fraction(0)) for m in shift_maximal_losing(v))
    if lightest_win <= heaviest_loss:
        return None
    gap = lightest_win - heaviest_loss
    return WeightedRepresentation(lightest_win / gap, tuple(w / gap for w in weights))


def _sorted_certificate(v: SimpleGame) -> Optional[WeightedRepresentation]:
    def compute():
        shortcut = _banzhaf_certificate(v)
        if shortcut is not None:
            return (shortcut,)
        rows, rhs = _weight_system(v)
        result = solve_lp(rows, rhs)
        if not result.feasible:
            return (None,)
        *weights, quota = result.x
        return (WeightedRepresentation(quota, tuple(weights)),)
    return v.cached("weight_certificate", compute)[0]


def _unsort(rep: Optional[WeightedRepresentation], order: Tuple[int, ...]) -> Optional[WeightedRepresentation]:
    if rep is None or order == tuple(range(1, len(order) + 1)):
        return rep
    weights = [Fraction(0)] * len(order)
    for new_pos, old_player in enumerate(order):
        weights[old_player - 1] = rep.weights[new_pos]
    return WeightedRepresentation(rep.quota, tuple(weights))


def is_weighted(v: SimpleGame) -> WeightednessCertificate:
    """Exact weightedness test for a complete game

    The returned weights satisfy w(S) >= q on winning and w(T) <= q - 1 on
    losing coalitions. Non-complete games are never weighted.
    """
    if not is_complete(v).is_complete:
        return WeightednessCertificate(None)
    ordered, order = sort_by_desirability(v)
    return WeightednessCertificate(_unsort(_sorted_certificate(ordered), order))


def minimum_sum_representation(v: SimpleGame) -> Optional[WeightedRepresentation]:
    """Integer representation from an optimal vertex of min w(N) + q under the gap convention

    The vertex is scaled by the lcm of its denominators and reduced by the gcd
    of the result, so the quota and weights are coprime and the gap stays at
    least 1. No integer search is run: a game can have an integer
    representation with a smaller sum than the scaled vertex.
    """
    def compute():
        if not is_complete(v).is_complete:
            return (None,)
        ordered, order = sort_by_desirability(v)
        rows, rhs = _weight_system(ordered)
        objective = [Fraction(-1)] * (v.n + 1)
        result = solve_lp(rows, rhs, objective)
        if not result.feasible or result.x is None:
            return (None,)
        scale = math.lcm(*(x.denominator for x in result.x))
        integers = [int(x * scale) for x in result.x]
        divisor = math.gcd(*integers) or 1
        *weights, quota = [Fraction(x // divisor) for x in integers]
        return (_unsort(WeightedRepresentation(quota, tuple(weights)), order),)
    return v.cached("minimum_representation", compute)[0]


def format_game(v: SimpleGame) -> str:
    """Bracket notation when weighted, else the minimal winning family"""
    rep = minimum_sum_representation(v)
    if rep is not None:
        return str(rep)
    return f"n={v.n} M=" + ";".join(",".join(str(p) for p in group) for group in describe_minimal_winning(v))


# Weighted games

def iter_weighted_games(
    n: int,
    filters: Sequence[GameFilter] = (),
    state: Optional[State] = None,
    allow_large: bool = False,
) -> Iterator[SimpleGame]:
    for v in iter_complete_games(n, filters, state, allow_large):
        if _sorted_certificate(v) is not None:
            yield v


def enumerate_weighted(
    n: int,
    filters: Sequence[GameFilter] = (),
    visitor: Optional[Callable[[SimpleGame], None]] = None,
    allow_large: bool = False,
) -> int:
    count = 0
    for v in iter_weighted_games(n, filters, allow_large=allow_large):
        count += 1
        if visitor is not None:
            visitor(v)
    logger.info(f"n={n}: {count} weighted games (filters: {_filter_names(filters)})")
    return count


def iter_games(
    n: int,
    universe: Universe,
    filters: Sequence[GameFilter] = (),
    state: Optional[State] = None,
    allow_large: bool = False,
) -> Iterator[SimpleGame]:
    if Universe(universe) == Universe.WEIGHTED:
        return iter_weighted_games(n, filters, state, allow_large)
    return iter_complete_games(n, filters, state, allow_large)


# Accumulators and parallel collection

class GameCounter:
    def __init__(self):
        self.count = 0

    def add(self, v: SimpleGame):
        self.count += 1

    def merge(self, other: "GameCounter") -> "GameCounter":
        self.count += other.count
        return self


class GameCollector:
    def __init__(self):
        self.games: List[SimpleGame] = []

    def add(self, v: SimpleGame):
        self.games.append(v)

    def merge(self, other: "GameCollector") -> "GameCollector":
        self.games.extend(other.games)
        return self


def _run_subtree(n: int, universe: Universe, filters: Tuple[GameFilter, ...], factory: Callable, allow_large: bool, state: State):
    accumulator = factory()
    for v in iter_games(n, universe, filters, state, allow_large):
        accumulator.add(v)
    return accumulator


def _progress() -> Progress:
    console = Console(stderr=True)
    return Progress(
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        TextColumn("{task.completed}/{task.total} subtrees"),
        TimeElapsedColumn(),
        console=console,
        disable=not sys.stderr.isatty(),
        transient=True,
    )


def collect(
    n: int,
    universe: Universe,
    filters: Sequence[GameFilter],
    factory: Callable,
    workers: Optional[int] = None,
    allow_large: bool = False,
):
    """Feed every game of the class into accumulators built by `factory` and merge them"""
    check_enumeration_range(n, allow_large)
    filters = tuple(GameFilter(f) for f in filters)
    universe = Universe(universe)
    states = split_states(shift_poset(n), settings.SPLIT_DEPTH)
    workers = workers or settings.worker_count
    job = partial(_run_subtree, n, universe, filters, factory, allow_large)

    partials = []
    with _progress() as progress:
        task = progress.add_task(f"n={n} {universe.value}", total=len(states))
        if workers <= 1 or len(states) == 1:
            for state in states:
                partials.append(job(state))
                progress.advance(task)
        else:
            with ProcessPoolExecutor(max_workers=min(workers, len(states))) as pool:
                futures = [pool.submit(job, state) for state in states]
                for future in futures:
                    partials.append(future.result())
                    progress.advance(task)

    result = factory()
    for part in partials:
        result.merge(part)
    logger.info(f"n={n}: scanned {len(states)} subtrees of {universe.value} games with {workers} worker(s)")
    return result


def list_games(
    n: int,
    universe: Universe = Universe.WEIGHTED,
    filters: Sequence[GameFilter] = (),
    workers: Optional[int] = None,
    allow_large: bool = False,
) -> List[SimpleGame]:
    return collect(n, universe, filters, GameCollector, workers, allow_large).games


def count_games(
    n: int,
    universe: Universe,
    filters: Sequence[GameFilter] = (),
    workers: Optional[int] = None,
    allow_large: bool = False,
) -> int:
    if Universe(universe) == Universe.COMPLETE and not filters:
        return count_complete(n, allow_large)
    return collect(n, universe, filters, GameCounter, workers, allow_large).count


# Count tables

def count_table(max_n: int, workers: Optional[int] = None, allow_large: bool = False) -> List[CountRow]:
    """Complete, weighted, uniform complete and uniform weighted counts for n = 1..max_n"""
    rows = []
    for n in range(1, max_n + 1):
        rows.append(CountRow(
            n=n,
            complete=count_complete(n, allow_large),
            weighted=count_games(n, Universe.WEIGHTED, (), workers, allow_large),
            uniform_complete=count_games(n, Universe.COMPLETE, (GameFilter.UNIFORM,), workers, allow_large),
            uniform_weighted=count_games(n, Universe.WEIGHTED, (GameFilter.UNIFORM,), workers, allow_large),
        ))
    return rows


def count_uniform_table(max_n: int, workers: Optional[int] = None) -> List[Tuple[int, int, int]]:
    """(n, uniform complete, uniform weighted) for n = 1..max_n"""
    check_enumeration_range(max_n)
    return [
        (
            n,
            count_games(n, Universe.COMPLETE, (GameFilter.UNIFORM,), workers),
            count_games(n, Universe.WEIGHTED, (GameFilter.UNIFORM,), workers),
        )
        for n in range(1, max_n + 1)
    ]


# Brute-force oracle

def iter_monotone_games(n: int) -> Iterator[SimpleGame]:
    """Every simple game on n labelled players (monotone boolean functions)"""
    if not 1 <= n <= ORACLE_MAX_PLAYERS:
        raise EnumerationLimitError(f"the monotone-function oracle supports 1 <= n <= {ORACLE_MAX_PLAYERS}")
    lattice = subset_lattice(n)
    for table in iter_upsets(lattice):
        yield SimpleGame(n, lattice.table_to_array(table), validate=False)


def canonical_complete_games(n: int, filters: Sequence[GameFilter] = ()) -> Dict[str, SimpleGame]:
    """Complete games found by brute force, relabelled by desirability and deduplicated"""
    found: Dict[str, SimpleGame] = {}
    for v in iter_monotone_games(n):
        if not is_complete(v).is_complete:
            continue
        ordered, _ = sort_by_desirability(v)
        if passes_filters(ordered, filters):
            found.setdefault(ordered.key(), ordered)
    return found


def _filter_names(filters: Iterable[GameFilter]) -> str:
    names = [GameFilter(f).value for f in filters]
    return ",".join(names) if names else "none"
