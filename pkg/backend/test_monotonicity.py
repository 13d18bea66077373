"""
Tests for convex combinations, LM thresholds and the cost of local monotonicity
"""

from fractions import Fraction as F

import pytest

from app.core.exceptions import (
    DimensionMismatchError,
    EmptyGameSourceError,
    IndexNotLmError,
    UsageError,
)
from app.models.enumeration import GameFilter, Universe
from app.models.index import IndexId
from app.models.monotonicity import ConvexWeights, parse_collection
from app.services import monotonicity_service
from app.services.index_service import normalize, raw_index
from app.services.monotonicity_service import (
    check_preserved_properties,
    combine,
    convex_index,
    cost_by_iteration,
    cost_for_class,
    cost_multi,
    cost_over_games,
    lm_check,
    lm_threshold,
    pair_differences,
    threshold_from_differences,
    violations,
)

BZ_PGI = (IndexId.BZ, IndexId.PGI)
BZ_S = (IndexId.BZ, IndexId.S)


def test_convex_weights_parsing():
    assert ConvexWeights.parse("1/2, 1/2").alphas == (F(1, 2), F(1, 2))
    assert ConvexWeights.parse("0.25,0.75").alphas == (F(1, 4), F(3, 4))
    assert ConvexWeights.unit(3).alphas == (1, 0, 0)
    for bad in ("1/2,1/3", "-1,2", "a,b", "1/0"):
        with pytest.raises(UsageError):
            ConvexWeights.parse(bad)


def test_collection_parsing():
    assert parse_collection("bz,PGI, s") == (IndexId.BZ, IndexId.PGI, IndexId.S)
    with pytest.raises(UsageError):
        parse_collection("bz,xyz")


def test_combined_index_on_the_star(star7):
    alpha = ConvexWeights.parse("1/2,1/2,0")
    combined = convex_index(star7, (IndexId.BZ, IndexId.PGI, IndexId.S), alpha)
    assert combined.values == (4,) + (5,) * 6
    found = violations(star7, (IndexId.BZ, IndexId.PGI, IndexId.S), alpha)
    assert [(f.pair, f.margin) for f in found] == [((1, 2), 1)]
    result = lm_check(star7, (IndexId.BZ, IndexId.PGI, IndexId.S), alpha)
    assert not result.satisfied
    assert result.violating_pair == (1, 2)
    assert result.margin == 1


def test_combined_index_checks_dimensions(star7):
    with pytest.raises(DimensionMismatchError):
        convex_index(star7, BZ_PGI, ConvexWeights.parse("1/3,1/3,1/3"))


def test_thresholds(star7, seven_player_bz_s):
    assert pair_differences(star7, BZ_PGI, 1) == (2, -4)
    assert lm_threshold(star7, 1, IndexId.BZ, IndexId.PGI) == F(2, 3)
    assert lm_threshold(seven_player_bz_s, 1, IndexId.BZ, IndexId.S) == F(7, 9)
    # at the threshold the pair is in order, just below it is not
    assert lm_check(star7, BZ_PGI, ConvexWeights.parse("2/3,1/3")).satisfied
    assert not lm_check(star7, BZ_PGI, ConvexWeights.parse("3/5,2/5")).satisfied


def test_threshold_edge_cases():
    assert threshold_from_differences(F(3), F(0)) == 0
    assert threshold_from_differences(F(3), F(-2)) == 0
    assert threshold_from_differences(F(0), F(2)) == 1
    assert threshold_from_differences(F(1), F(1)) == F(1, 2)


def test_first_index_must_be_lm(weighted_games):
    with pytest.raises(IndexNotLmError):
        cost_over_games(weighted_games[3], IndexId.PGI, IndexId.BZ)
    with pytest.raises(EmptyGameSourceError):
        cost_over_games([], IndexId.BZ, IndexId.PGI)


@pytest.mark.parametrize("n,expected", [(2, F(0)), (3, F(0)), (4, F(1, 3)), (5, F(1, 2))])
def test_bz_pgi_cost_on_weighted_games(weighted_games, n, expected):
    result = cost_over_games(weighted_games[n], IndexId.BZ, IndexId.PGI)
    assert result.value == expected
    assert result.games_scanned == len(weighted_games[n])
    if expected:
        i = result.witness_pair[0]
        assert lm_threshold(result.witness_game, i, IndexId.BZ, IndexId.PGI) == expected
    else:
        assert result.witness_game is None or result.witness_threshold == 0


@pytest.mark.parametrize("n,expected", [(4, F(1, 3)), (5, F(1, 2))])
def test_bz_s_cost_on_weighted_games(weighted_games, n, expected):
    assert cost_over_games(weighted_games[n], IndexId.BZ, IndexId.S).value == expected


@pytest.mark.parametrize("n", [3, 4, 5])
def test_iteration_agrees_with_direct_cost(weighted_games, n):
    direct = cost_over_games(weighted_games[n], IndexId.BZ, IndexId.PGI)
    iterated, trace = cost_by_iteration(weighted_games[n], IndexId.BZ, IndexId.PGI)
    assert iterated.value == direct.value
    assert [step.next_alpha1 for step in trace] == sorted(step.next_alpha1 for step in trace)
    if trace:
        assert trace[0].alpha1 == 0
        assert trace[-1].next_alpha1 == direct.value


def test_multi_index_cost_is_the_largest_pairwise_cost(weighted_games):
    games = weighted_games[5]
    result = cost_multi(games, (IndexId.BZ, IndexId.PGI, IndexId.S))
    pairwise = [cost_over_games(games, IndexId.BZ, h).value for h in (IndexId.PGI, IndexId.S)]
    assert result.value == max(pairwise)
    assert [result.pair_costs[h].value for h in (IndexId.PGI, IndexId.S)] == pairwise


def test_cost_for_class_methods():
    direct, trace = cost_for_class(5, BZ_PGI, Universe.WEIGHTED, workers=1)
    assert direct.value == F(1, 2)
    assert trace == []
    iterated, steps = cost_for_class(5, BZ_PGI, Universe.WEIGHTED, method="iterative", workers=1)
    assert iterated.value == F(1, 2)
    assert steps
    with pytest.raises(UsageError):
        cost_for_class(4, (IndexId.BZ, IndexId.PGI, IndexId.S), method="iterative", workers=1)
    with pytest.raises(UsageError):
        cost_for_class(4, BZ_PGI, method="bisection", workers=1)


def test_restricted_classes():
    proper, _ = cost_for_class(5, BZ_PGI, Universe.WEIGHTED, (GameFilter.PROPER,), workers=1)
    assert proper.value == F(1, 3)
    constant_sum, _ = cost_for_class(5, BZ_PGI, Universe.WEIGHTED, (GameFilter.CONSTANT_SUM,), workers=1)
    assert constant_sum.value == 0


def test_direct_cost_does_not_depend_on_worker_count():
    single, _ = cost_for_class(5, BZ_S, Universe.WEIGHTED, workers=1)
    pooled, _ = cost_for_class(5, BZ_S, Universe.WEIGHTED, workers=2)
    assert (single.value, single.witness_game, single.witness_pair) == (pooled.value, pooled.witness_game, pooled.witness_pair)


def test_combination_keeps_shared_properties(weighted_games):
    games = [v for n in range(1, 6) for v in weighted_games[n]]
    report = check_preserved_properties(BZ_PGI, ConvexWeights.parse("1/2,1/2"), games)
    assert report.games_checked == len(games)
    assert report.all_preserved, report.failures()
    assert not report.outcomes["local_monotonicity"].components_hold

    report = check_preserved_properties((IndexId.PGI, IndexId.DP), ConvexWeights.parse("1/3,2/3"), games)
    assert report.outcomes["invariance_for_nulls"].holds
    assert report.all_preserved


def test_efficiency_is_checked_on_the_combined_vector(star7, weighted_games, monkeypatch):
    half = ConvexWeights.parse("1/2,1/2")
    bz, pgi = (normalize(raw_index(star7, index_id)) for index_id in BZ_PGI)
    mixed = combine([bz, pgi], half)
    assert mixed == tuple((a + b) / 2 for a, b in zip(bz.values, pgi.values))
    assert sum(mixed) == 1

    games = weighted_games[4]
    assert check_preserved_properties(BZ_PGI, half, games).outcomes["efficiency"].holds
    # raw vectors in place of normalized ones
    monkeypatch.setattr(monotonicity_service, "normalize", lambda x: x)
    outcome = check_preserved_properties(BZ_PGI, half, games).outcomes["efficiency"]
    assert not outcome.holds
    assert not outcome.components_hold
    assert outcome.preserved
    assert outcome.counterexample == games[0].key()


@pytest.mark.slow
@pytest.mark.parametrize("n,expected", [(6, F(3, 5)), (7, F(2, 3))])
def test_bz_pgi_cost_large(n, expected):
    result, _ = cost_for_class(n, BZ_PGI, Universe.WEIGHTED)
    assert result.value == expected


@pytest.mark.slow
def test_bz_s_cost_seven_players():
    result, _ = cost_for_class(7, BZ_S, Universe.WEIGHTED)
    assert result.value == F(7, 9)
