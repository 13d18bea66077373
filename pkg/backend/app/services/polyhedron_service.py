"""
LM polyhedron service
The set of multipliers α in the simplex whose combined index keeps every
adjacent pair of every game in order, computed in exact arithmetic.

Each (game, pair) gives a halfspace α·d >= 0. `plm_direct` intersects all
distinct halfspaces of a game source with the simplex; `plm_lazy` starts
from the simplex (or from seed cuts), checks vertices against the
separation oracle and cuts until every vertex is verified.
"""

import logging
from fractions import Fraction
from functools import partial
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from app.algorithms.polygon import intersect
from app.core.exceptions import DimensionMismatchError, EmptyGameSourceError, UnsupportedDimensionError, UsageError
from app.models.enumeration import GameFilter, Universe
from app.models.game import SimpleGame
from app.models.index import IndexId
from app.models.monotonicity import ConvexWeights
from app.models.polyhedron import (
    Certificate,
    Halfspace,
    LazyTraceStep,
    LmPolyhedron,
    OracleViolation,
    Vertex,
)
from app.services.enumeration_service import collect
from app.services.game_service import ensure_sorted_complete
from app.services.monotonicity_service import pair_differences, require_lm_first

logger = logging.getLogger(__name__)

SeedCertificate = Union[Certificate, Tuple[SimpleGame, int]]


def certificate_halfspace(v: SimpleGame, pair: int, collection: Sequence[IndexId]) -> Halfspace:
    return Halfspace(pair_differences(v, collection, pair), Certificate(v, pair))


class HalfspaceBank:
    """Distinct halfspaces of a game source, each kept with its smallest certificate

    Works as an enumeration accumulator: `add` takes a game, `merge` another
    bank, and the result does not depend on arrival order.
    """

    def __init__(self, collection: Sequence[IndexId]):
        self.collection: Tuple[IndexId, ...] = tuple(IndexId(c) for c in collection)
        require_lm_first(self.collection)
        self.games_scanned = 0
        self._by_d: Dict[Tuple[Fraction, ...], Halfspace] = {}

    @classmethod
    def from_games(cls, collection: Sequence[IndexId], games: Iterable[SimpleGame]) -> "HalfspaceBank":
        bank = cls(collection)
        for v in games:
            bank.add(v)
        return bank

    @classmethod
    def from_certificates(cls, collection: Sequence[IndexId], certificates: Iterable[SeedCertificate]) -> "HalfspaceBank":
        bank = cls(collection)
        seen = set()
        for certificate in certificates:
            v, pair = _unpack(certificate)
            ensure_sorted_complete(v)
            if v.key() not in seen:
                seen.add(v.key())
                bank.games_scanned += 1
            bank.add_halfspace(certificate_halfspace(v, pair, bank.collection))
        return bank

    @property
    def r(self) -> int:
        return len(self.collection)

    def add(self, v: SimpleGame):
        ensure_sorted_complete(v)
        self.games_scanned += 1
        for pair in range(1, v.n):
            self.add_halfspace(certificate_halfspace(v, pair, self.collection))

    def add_halfspace(self, halfspace: Halfspace):
        existing = self._by_d.get(halfspace.d)
        if existing is None or halfspace.certificate.sort_key() < existing.certificate.sort_key():
            self._by_d[halfspace.d] = halfspace

    def merge(self, other: "HalfspaceBank") -> "HalfspaceBank":
        self.games_scanned += other.games_scanned
        for halfspace in other._by_d.values():
            self.add_halfspace(halfspace)
        return self

    @property
    def halfspaces(self) -> List[Halfspace]:
        return sorted(self._by_d.values(), key=lambda h: h.certificate.sort_key())

    def __len__(self) -> int:
        return len(self._by_d)

    def most_violated(self, alpha: Sequence[Fraction]) -> Optional[OracleViolation]:
        """Largest -α·d over the bank; ties go to the smallest certificate"""
        if self.games_scanned == 0:
            raise EmptyGameSourceError("the separation oracle received no games")
        best: Optional[OracleViolation] = None
        for halfspace in self.halfspaces:
            value = -halfspace.value(alpha)
            if value > 0 and (best is None or value > best.value):
                best = OracleViolation(value, halfspace)
        return best


def _unpack(certificate: SeedCertificate) -> Tuple[SimpleGame, int]:
    if isinstance(certificate, Certificate):
        return certificate.game, certificate.pair
    return certificate[0], certificate[1]


def _as_bank(source, collection: Optional[Sequence[IndexId]]) -> HalfspaceBank:
    if isinstance(source, HalfspaceBank):
        if collection is not None and tuple(IndexId(c) for c in collection) != source.collection:
            raise UsageError("the halfspace bank was built for another index collection")
        return source
    if collection is None:
        raise UsageError("an index collection is needed to build halfspaces from games")
    bank = HalfspaceBank.from_games(collection, source)
    if bank.games_scanned == 0:
        raise EmptyGameSourceError("the game source is empty")
    return bank


def _as_alpha(alpha, r: int) -> Tuple[Fraction, ...]:
    values = alpha.alphas if isinstance(alpha, ConvexWeights) else ConvexWeights(tuple(alpha)).alphas
    if len(values) != r:
        raise DimensionMismatchError(f"{len(values)} multipliers for {r} indices")
    return values


def _check_dimension(r: int):
    if r not in (2, 3):
        raise UnsupportedDimensionError(f"polyhedra are computed for two or three indices, got {r}")


def build_bank(
    n: int,
    collection: Sequence[IndexId],
    universe: Universe = Universe.WEIGHTED,
    filters: Sequence[GameFilter] = (),
    workers: Optional[int] = None,
) -> HalfspaceBank:
    """Halfspaces of every enumerated game of the class"""
    bank = collect(n, universe, filters, partial(HalfspaceBank, tuple(collection)), workers)
    logger.info(f"n={n}: {len(bank)} distinct halfspaces from {bank.games_scanned} games")
    return bank


def separation_oracle(alpha, source, collection: Optional[Sequence[IndexId]] = None) -> Optional[OracleViolation]:
    """None when α is in the polyhedron, else the most violated halfspace"""
    bank = _as_bank(source, collection)
    return bank.most_violated(_as_alpha(alpha, bank.r))


# Geometry

def _distinct(halfspaces: Iterable[Halfspace]) -> List[Halfspace]:
    """Drop halfspaces implied by α >= 0 and repeated directions"""
    seen = set()
    result = []
    for halfspace in halfspaces:
        if halfspace.trivial:
            continue
        direction = halfspace.normalized()
        if direction in seen:
            continue
        seen.add(direction)
        result.append(halfspace)
    return result


def _interval(halfspaces: Sequence[Halfspace]) -> List[Vertex]:
    """r = 2: (d1 - d2)·α₁ + d2 >= 0 for α₁ in [0, 1]"""
    low, high = Fraction(0), Fraction(1)
    for halfspace in halfspaces:
        d1, d2 = halfspace.d
        slope = d1 - d2
        if slope > 0:
            low = max(low, -d2 / slope)
        elif slope < 0:
            high = min(high, -d2 / slope)
        elif d2 < 0:
            return []
    if low > high:
        return []
    points = [high] if low == high else [high, low]
    return [(a, 1 - a) for a in points]


def _polygon(halfspaces: Sequence[Halfspace]) -> List[Vertex]:
    """r = 3 in the (α₁, α₂) chart with α₃ = 1 - α₁ - α₂"""
    halfplanes = [(d1 - d3, d2 - d3, d3) for d1, d2, d3 in (h.d for h in halfspaces)]
    return [(x, y, 1 - x - y) for x, y in intersect(halfplanes)]


def _vertices(halfspaces: Sequence[Halfspace], r: int) -> List[Vertex]:
    _check_dimension(r)
    distinct = _distinct(halfspaces)
    return _interval(distinct) if r == 2 else _polygon(distinct)


def _non_redundant(vertices: Sequence[Vertex], halfspaces: Sequence[Halfspace], r: int) -> List[Halfspace]:
    """Halfspaces that support a facet of the result"""
    needed = 2 if r == 3 and len(vertices) >= 3 else 1
    return [
        halfspace for halfspace in _distinct(halfspaces)
        if sum(1 for vertex in vertices if halfspace.value(vertex) == 0) >= needed
    ]


def plm_direct(n: int, source, collection: Optional[Sequence[IndexId]] = None) -> LmPolyhedron:
    """Intersect the simplex with every halfspace of the source"""
    bank = _as_bank(source, collection)
    _check_dimension(bank.r)
    halfspaces = bank.halfspaces
    vertices = _vertices(halfspaces, bank.r)
    polyhedron = LmPolyhedron(bank.collection, vertices, _non_redundant(vertices, halfspaces, bank.r), n)
    logger.info(f"n={n}: direct polyhedron with {len(vertices)} vertices from {len(halfspaces)} halfspaces")
    return polyhedron


def plm_lazy(
    n: int,
    source,
    collection: Optional[Sequence[IndexId]] = None,
    seed_certificates: Sequence[SeedCertificate] = (),
) -> Tuple[LmPolyhedron, List[LazyTraceStep]]:
    """Cut the simplex until every vertex passes the separation oracle

    (1, 0, ..., 0) is always feasible and never sent to the oracle. Vertices
    are recomputed from scratch after every cut.
    """
    bank = _as_bank(source, collection)
    r = bank.r
    _check_dimension(r)
    cuts: List[Halfspace] = []
    for certificate in seed_certificates:
        v, pair = _unpack(certificate)
        ensure_sorted_complete(v)
        cuts.append(certificate_halfspace(v, pair, bank.collection))
    vertices = _vertices(cuts, r)
    unit = tuple(Fraction(1 if h == 0 else 0) for h in range(r))
    verified = {unit}
    trace: List[LazyTraceStep] = []

    while True:
        pending = next((vertex for vertex in vertices if vertex not in verified), None)
        if pending is None:
            break
        violation = bank.most_violated(pending)
        if violation is None:
            verified.add(pending)
            continue
        cuts.append(violation.halfspace)
        vertices = _vertices(cuts, r)
        step = LazyTraceStep(
            round=len(trace) + 1,
            vertex=pending,
            certificate=violation.halfspace.certificate,
            d=violation.halfspace.d,
            violation=violation.value,
            vertices_after=tuple(vertices),
        )
        trace.append(step)
        logger.debug(f"round {step.round}: vertex {_text(pending)} cut by pair {step.certificate.pair} of {step.certificate.game.key()}")

    polyhedron = LmPolyhedron(bank.collection, vertices, _non_redundant(vertices, cuts, r), n)
    logger.info(f"n={n}: lazy polyhedron with {len(vertices)} vertices after {len(trace)} cuts")
    return polyhedron, trace


def cost_from_polyhedron(polyhedron: LmPolyhedron) -> Fraction:
    """Largest over edges e1-e_j of the smallest α₁ the polyhedron reaches on that edge"""
    r = polyhedron.r
    cost = Fraction(0)
    for j in range(1, r):
        on_edge = [
            vertex[0] for vertex in polyhedron.vertices
            if all(vertex[h] == 0 for h in range(1, r) if h != j)
        ]
        if on_edge:
            cost = max(cost, min(on_edge))
    return cost


def polygon_boundary(polyhedron: LmPolyhedron) -> List[Tuple[Fraction, Fraction]]:
    """Vertices in cyclic order as (α₂, α₃)"""
    if polyhedron.r != 3:
        raise UnsupportedDimensionError("the boundary is drawn for three indices")
    return [(vertex[1], vertex[2]) for vertex in polyhedron.vertices]


def polyhedron_for_class(
    n: int,
    collection: Sequence[IndexId],
    universe: Universe = Universe.WEIGHTED,
    filters: Sequence[GameFilter] = (),
    method: str = "direct",
    workers: Optional[int] = None,
) -> Tuple[LmPolyhedron, List[LazyTraceStep]]:
    _check_dimension(len(collection))
    bank = build_bank(n, collection, universe, filters, workers)
    if method == "lazy":
        return plm_lazy(n, bank)
    if method != "direct":
        raise UsageError(f"unknown polyhedron method {method!r}; use direct or lazy")
    return plm_direct(n, bank), []


def _text(vertex: Vertex) -> str:
    return "(" + ",".join(str(x) for x in vertex) + ")"
