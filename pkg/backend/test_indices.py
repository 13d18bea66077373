"""
Tests for the raw and normalized power indices
"""

from fractions import Fraction as F

import pytest

from app.core.exceptions import GameNotCompleteError, ZeroIndexSumError
from app.models.index import IndexId, IndexVector
from app.services.game_service import game_from_minimal_winning
from app.services.index_service import (
    decisive_coalition_count,
    index_profile,
    index_respects_desirability,
    normalize,
    raw_banzhaf,
    raw_index,
    raw_johnston,
    raw_pgi,
)


def test_small_game_vectors(make_game):
    v = make_game(3, 2, 1, 1, 1)
    expected = {
        IndexId.BZ: (6, 2, 2, 2),
        IndexId.PGI: (3, 2, 2, 2),
        IndexId.S: (3, 2, 2, 2),
        IndexId.JO: (F(9, 2), F(5, 6), F(5, 6), F(5, 6)),
        IndexId.DP: (F(3, 2), F(5, 6), F(5, 6), F(5, 6)),
        IndexId.SDP: (F(3, 2), F(5, 6), F(5, 6), F(5, 6)),
    }
    profile = index_profile(v, expected)
    for index_id, values in expected.items():
        assert profile[index_id].values == tuple(F(x) for x in values), index_id


def test_normalized_vectors(make_game):
    v = make_game(3, 2, 1, 1, 1)
    assert normalize(raw_index(v, IndexId.BZ)).values == (F(1, 2), F(1, 6), F(1, 6), F(1, 6))
    assert normalize(raw_index(v, IndexId.JO)).values == (F(9, 14), F(5, 42), F(5, 42), F(5, 42))
    assert normalize(raw_index(v, IndexId.DP)).values == (F(3, 8), F(5, 24), F(5, 24), F(5, 24))
    assert normalize(raw_index(v, IndexId.PGI)).normalized


def test_star_game_scores(star7):
    assert raw_index(star7, IndexId.BZ).values == (7, 5, 5, 5, 5, 5, 5)
    assert raw_index(star7, IndexId.PGI).values == (1, 5, 5, 5, 5, 5, 5)
    assert raw_index(star7, IndexId.S).values == (1, 5, 5, 5, 5, 5, 5)


def test_seven_player_witness_scores(seven_player_bz_s):
    bz = raw_index(seven_player_bz_s, IndexId.BZ)
    s = raw_index(seven_player_bz_s, IndexId.S)
    assert (bz[1], bz[2]) == (33, 31)
    assert (s[1], s[2]) == (1, 8)


def test_shift_indices_need_a_complete_game():
    v = game_from_minimal_winning(4, [(1, 2), (3, 4)])
    assert raw_index(v, IndexId.BZ).values == (3, 3, 3, 3)
    with pytest.raises(GameNotCompleteError):
        raw_index(v, IndexId.S)
    with pytest.raises(GameNotCompleteError):
        raw_index(v, IndexId.SDP)


def test_zero_vector_cannot_be_normalized():
    with pytest.raises(ZeroIndexSumError):
        normalize(IndexVector((F(0), F(0)), IndexId.BZ))


def test_index_names():
    assert IndexId.parse(" SDP ") == IndexId.SDP
    assert IndexId.JO.label == "Jo"
    assert IndexVector((F(1),), IndexId.DP).name == "DP"


def test_inclusion_and_conservation(weighted_games):
    """S <= PGI <= Bz per player; Johnston shares add up to the decisive coalitions"""
    for n in range(1, 6):
        for v in weighted_games[n]:
            bz = raw_index(v, IndexId.BZ).values
            pgi = raw_index(v, IndexId.PGI).values
            s = raw_index(v, IndexId.S).values
            assert all(a <= b <= c for a, b, c in zip(s, pgi, bz))
            assert raw_index(v, IndexId.JO).total() == decisive_coalition_count(v)


def test_lm_indices_respect_desirability(weighted_games):
    for n in range(2, 6):
        for v in weighted_games[n]:
            for index_id in (IndexId.BZ, IndexId.JO):
                holds, pair = index_respects_desirability(v, raw_index(v, index_id))
                assert holds and pair is None


def test_single_index_functions_match_the_dispatcher(make_game):
    v = make_game(3, 2, 1, 1, 1)
    assert raw_banzhaf(v) == raw_index(v, IndexId.BZ)
    assert raw_pgi(v) == raw_index(v, IndexId.PGI)
    assert raw_johnston(v) == raw_index(v, IndexId.JO)
    assert raw_banzhaf(v).values == (6, 2, 2, 2)
