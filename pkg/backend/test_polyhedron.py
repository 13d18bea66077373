"""
Tests for the LM polyhedron, the separation oracle and polygon clipping
"""

from fractions import Fraction as F

import pytest

from app.algorithms.polygon import TRIANGLE, clip, intersect
from app.core.exceptions import EmptyGameSourceError, IndexNotLmError, UnsupportedDimensionError, UsageError
from app.models.index import IndexId
from app.models.polyhedron import Certificate
from app.services.monotonicity_service import pair_differences
from app.services.polyhedron_service import (
    HalfspaceBank,
    build_bank,
    cost_from_polyhedron,
    plm_direct,
    plm_lazy,
    polygon_boundary,
    polyhedron_for_class,
    separation_oracle,
)

BZ_PGI = (IndexId.BZ, IndexId.PGI)
BZ_PGI_S = (IndexId.BZ, IndexId.PGI, IndexId.S)
N4_VERTICES = [(F(1), F(0), F(0)), (F(1, 3), F(2, 3), F(0)), (F(1, 3), F(0), F(2, 3))]
N6_VERTICES = {(F(1), F(0), F(0)), (F(3, 5), F(2, 5), F(0)), (F(3, 5), F(0), F(2, 5))}
N7_VERTICES = {(F(1), F(0), F(0)), (F(2, 3), F(1, 3), F(0)), (F(7, 9), F(0), F(2, 9)), (F(2, 3), F(1, 4), F(1, 12))}
PUSH = F(1, 10**6)


def test_clip_keeps_the_inner_side():
    assert clip(TRIANGLE, (F(1), F(0), F(-1, 2))) == [(F(1), F(0)), (F(1, 2), F(1, 2)), (F(1, 2), F(0))]
    assert clip(TRIANGLE, (F(1), F(0), F(-1))) == [(F(1), F(0))]
    assert clip(TRIANGLE, (F(1), F(0), F(-2))) == []
    assert clip(TRIANGLE, (F(0), F(0), F(1))) == TRIANGLE


def test_intersection_starts_at_the_first_unit_vector():
    polygon = intersect([(F(0), F(-1), F(1, 2))])
    assert polygon[0] == (F(1), F(0))
    assert set(polygon) == {(F(1), F(0)), (F(1, 2), F(1, 2)), (F(0), F(1, 2)), (F(0), F(0))}


def test_star_gives_one_halfspace(star7):
    bank = HalfspaceBank.from_games(BZ_PGI, [star7])
    assert [h.d for h in bank.halfspaces if not h.trivial] == [(F(2), F(-4))]
    polyhedron = plm_direct(7, bank)
    assert polyhedron.vertices == [(F(1), F(0)), (F(2, 3), F(1, 3))]
    assert cost_from_polyhedron(polyhedron) == F(2, 3)


def test_separation_oracle(star7):
    violation = separation_oracle((F(1, 2), F(1, 2)), [star7], BZ_PGI)
    assert violation.value == 1
    assert violation.halfspace.certificate == Certificate(star7, 1)
    assert separation_oracle((F(2, 3), F(1, 3)), [star7], BZ_PGI) is None
    with pytest.raises(EmptyGameSourceError):
        separation_oracle((F(1), F(0)), [], BZ_PGI)
    with pytest.raises(UsageError):
        separation_oracle((F(1), F(0)), [star7])


def test_four_player_polygon(weighted_games):
    direct = plm_direct(4, weighted_games[4], BZ_PGI_S)
    assert direct.vertices == N4_VERTICES
    assert cost_from_polyhedron(direct) == F(1, 3)
    assert polygon_boundary(direct) == [(F(0), F(0)), (F(2, 3), F(0)), (F(0), F(2, 3))]
    assert direct.contains((F(1, 2), F(1, 4), F(1, 4)))
    assert not direct.contains((F(1, 4), F(3, 8), F(3, 8)))


def test_lazy_agrees_with_direct(weighted_games):
    for n in (3, 4, 5):
        bank = HalfspaceBank.from_games(BZ_PGI_S, weighted_games[n])
        direct = plm_direct(n, bank)
        lazy, trace = plm_lazy(n, bank)
        assert lazy.vertices == direct.vertices
        assert all(step.violation > 0 for step in trace)
        for step in trace:
            assert step.vertex not in step.vertices_after


def test_lazy_with_a_seed_cut(weighted_games, make_game):
    seed = [(make_game(2, 2, 1, 1, 1), 1)]
    lazy, trace = plm_lazy(4, weighted_games[4], BZ_PGI_S, seed_certificates=seed)
    assert lazy.vertices == N4_VERTICES
    assert trace == []


def test_two_index_polyhedron_matches_the_cost(weighted_games):
    polyhedron = plm_direct(5, weighted_games[5], BZ_PGI)
    assert polyhedron.vertices == [(F(1), F(0)), (F(1, 2), F(1, 2))]
    assert cost_from_polyhedron(polyhedron) == F(1, 2)


def test_bank_does_not_depend_on_game_order(weighted_games):
    forward = HalfspaceBank.from_games(BZ_PGI_S, weighted_games[5])
    backward = HalfspaceBank.from_games(BZ_PGI_S, reversed(weighted_games[5]))
    assert [h.d for h in forward.halfspaces] == [h.d for h in backward.halfspaces]
    assert [h.certificate for h in forward.halfspaces] == [h.certificate for h in backward.halfspaces]


def test_polyhedron_for_class_checks_its_inputs():
    with pytest.raises(UnsupportedDimensionError):
        polyhedron_for_class(4, (IndexId.BZ, IndexId.PGI, IndexId.S, IndexId.DP), workers=1)
    with pytest.raises(IndexNotLmError):
        polyhedron_for_class(4, (IndexId.PGI, IndexId.BZ), workers=1)
    with pytest.raises(UsageError):
        polyhedron_for_class(4, BZ_PGI, method="simplex", workers=1)
    poly, trace = polyhedron_for_class(4, BZ_PGI_S, method="lazy", workers=2)
    assert poly.vertices == N4_VERTICES
    assert trace


def test_nine_player_cutting_trace(make_game):
    star = make_game(2, 2, 1, 1, 1, 1, 1, 1, 1, 1)
    mixed = make_game(30, 16, 15, 7, 7, 3, 3, 3, 3, 3)
    last = make_game(18, 13, 12, 5, 2, 2, 2, 2, 2, 2)
    polyhedron, trace = plm_lazy(9, [star, mixed, last], BZ_PGI_S)
    assert [step.round for step in trace] == [1, 2, 3, 4]
    assert trace[1].certificate == Certificate(star, 1)
    assert trace[1].d == (F(2), F(-6), F(-6))
    assert trace[2].certificate == Certificate(mixed, 1)
    assert trace[2].d == (F(2), F(-4), F(-25))
    assert (F(3, 4), F(19, 84), F(1, 42)) in trace[2].vertices_after
    assert trace[3].vertex == (F(3, 4), F(19, 84), F(1, 42))
    assert trace[3].certificate == Certificate(last, 1)
    assert trace[3].d == (F(2), F(-5), F(-25))
    assert trace[3].violation == F(19, 84)
    assert polyhedron.vertices == [
        (F(1), F(0), F(0)),
        (F(3, 4), F(1, 4), F(0)),
        (F(3, 4), F(19, 80), F(1, 80)),
        (F(25, 27), F(0), F(2, 27)),
    ]
    assert cost_from_polyhedron(polyhedron) == F(25, 27)


def _assert_vertices_are_tight(polyhedron, bank):
    """Every vertex passes the oracle and a small push off it fails"""
    unit = (F(1),) + (F(0),) * (polyhedron.r - 1)
    for vertex in polyhedron.vertices:
        assert separation_oracle(vertex, bank) is None, vertex
        if vertex == unit:
            continue
        tight = next(h for h in polyhedron.halfspaces if h.value(vertex) == 0 and not h.trivial)
        k = min(range(polyhedron.r), key=lambda h: tight.d[h])
        pushed = tuple((1 - PUSH) * a + (PUSH if h == k else 0) for h, a in enumerate(vertex))
        violation = separation_oracle(pushed, bank)
        assert violation is not None and violation.value > 0, vertex


def _assert_certificates_recompute(halfspaces, collection):
    for halfspace in halfspaces:
        certificate = halfspace.certificate
        assert pair_differences(certificate.game, collection, certificate.pair) == halfspace.d


@pytest.mark.parametrize("n", [4, 5])
def test_vertices_pass_the_oracle_and_pushed_points_fail(weighted_games, n):
    bank = HalfspaceBank.from_games(BZ_PGI_S, weighted_games[n])
    _assert_vertices_are_tight(plm_direct(n, bank), bank)
    lazy, _ = plm_lazy(n, bank)
    _assert_vertices_are_tight(lazy, bank)
    two = HalfspaceBank.from_games(BZ_PGI, weighted_games[n])
    _assert_vertices_are_tight(plm_direct(n, two), two)


def test_certificates_recompute_their_halfspaces(weighted_games):
    bank = HalfspaceBank.from_games(BZ_PGI_S, weighted_games[5])
    _assert_certificates_recompute(bank.halfspaces, BZ_PGI_S)
    _assert_certificates_recompute(plm_direct(5, bank).halfspaces, BZ_PGI_S)
    _, trace = plm_lazy(5, bank)
    for step in trace:
        assert pair_differences(step.certificate.game, BZ_PGI_S, step.certificate.pair) == step.d


@pytest.mark.slow
@pytest.mark.parametrize("n,expected,cost", [(6, N6_VERTICES, F(3, 5)), (7, N7_VERTICES, F(7, 9))])
def test_six_and_seven_player_polygons(n, expected, cost):
    bank = build_bank(n, BZ_PGI_S, workers=2)
    direct = plm_direct(n, bank)
    lazy, _ = plm_lazy(n, bank)
    assert set(direct.vertices) == expected
    assert direct.vertices[0] == (F(1), F(0), F(0))
    assert lazy.vertices == direct.vertices
    assert cost_from_polyhedron(direct) == cost
    _assert_vertices_are_tight(direct, bank)
    _assert_certificates_recompute(direct.halfspaces, BZ_PGI_S)
