"""
Tests for the ILP export: LP text, model structure and assignment checks
"""

import random
from fractions import Fraction as F

import pytest

from app.core.exceptions import PlayerOutOfRangeError, RepresentationMismatchError, SolutionFormatError, UsageError
from app.models.game import WeightedRepresentation
from app.models.index import IndexId
from app.models.monotonicity import ConvexWeights
from app.services.enumeration_service import minimum_sum_representation
from app.services.game_service import classify, game_from_weighted
from app.services.ilp_service import (
    build_model,
    default_big_m,
    emit_lp_text,
    evaluate_assignment,
    read_solution,
)
from app.services.monotonicity_service import convex_index

HALF = ConvexWeights.parse("1/2,1/2")
BZ_PGI = (IndexId.BZ, IndexId.PGI)
BZ_S = (IndexId.BZ, IndexId.S)


def test_lp_text_matches_the_golden_file(fixtures_dir):
    model = build_model(2, BZ_S, HALF, 1)
    expected = (fixtures_dir / "ilp_n2.lp").read_text(encoding="utf-8")
    assert emit_lp_text(model) == expected
    assert emit_lp_text(build_model(2, BZ_S, HALF, 1)) == expected


def test_four_player_lp_text_matches_the_golden_file(fixtures_dir):
    model = build_model(4, BZ_PGI, HALF, 2, constant_sum=True)
    expected = (fixtures_dir / "ilp_n4.lp").read_text(encoding="utf-8")
    assert emit_lp_text(model) == expected


@pytest.mark.parametrize("n,expected", [(2, 6), (3, 12), (4, 28), (7, 448)])
def test_default_big_m(n, expected):
    assert default_big_m(n) == expected


def test_four_player_model_structure():
    model = build_model(4, BZ_PGI, HALF, 2, constant_sum=True)
    assert len(model.family("x")) == 16
    assert len(model.family("y")) == 64
    assert len(model.family("t")) == 3
    assert len(model.family("w")) == 4
    assert len(model.constraint_family("mono")) == 32
    assert len(model.constraint_family("shift")) == 12
    assert len(model.constraint_family("cs")) == 8
    assert model.constraint_family("proper") == []
    assert model.objective_scale == 2


def test_model_classes_drop_their_constraints():
    simple = build_model(3, BZ_PGI, HALF, 1, model_class="simple")
    assert simple.constraint_family("shift") == []
    assert simple.constraint_family("bigM1") == []
    assert simple.family("w") == []
    complete = build_model(3, BZ_PGI, HALF, 1, model_class="complete")
    assert complete.constraint_family("shift")
    assert complete.constraint_family("bigM2") == []
    integer = emit_lp_text(build_model(3, BZ_PGI, HALF, 1, integer_weights=True))
    assert "Generals\n w_1 w_2 w_3 q\n" in integer


def test_build_model_rejects_bad_input():
    with pytest.raises(UsageError):
        build_model(1, BZ_PGI, HALF, 1)
    with pytest.raises(UsageError):
        build_model(3, BZ_PGI, HALF, 1, model_class="proper")
    with pytest.raises(PlayerOutOfRangeError):
        build_model(3, BZ_PGI, HALF, 3)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_every_weighted_game_satisfies_its_model(weighted_games, n):
    model = build_model(n, BZ_PGI, HALF, 1)
    for v in weighted_games[n]:
        report = evaluate_assignment(model, v, minimum_sum_representation(v))
        assert report.feasible, (v, report.violations[:3])


def test_class_flags_admit_their_games(weighted_games):
    model = build_model(4, BZ_PGI, HALF, 1, proper=True, strong=True)
    for v in weighted_games[4]:
        flags = classify(v)
        report = evaluate_assignment(model, v, minimum_sum_representation(v))
        assert report.feasible == (flags.proper and flags.strong)


def test_objective_on_known_games(star7):
    model = build_model(7, BZ_PGI, HALF, 1)
    report = evaluate_assignment(model, star7, WeightedRepresentation(2, (2, 1, 1, 1, 1, 1, 1)))
    assert report.feasible
    assert report.objective == 1

    rep = WeightedRepresentation(14, (9, 8, 5, 2, 2, 2, 2))
    model = build_model(7, (IndexId.BZ, IndexId.PGI, IndexId.S), ConvexWeights.parse("7/9,0,2/9"), 1)
    report = evaluate_assignment(model, game_from_weighted(rep), rep)
    assert report.feasible
    assert report.objective == 0


def test_dictator_assignment():
    model = build_model(2, BZ_S, HALF, 1)
    rep = WeightedRepresentation(1, (1, 0))
    report = evaluate_assignment(model, game_from_weighted(rep), rep)
    assert report.feasible
    assert report.objective == F(-3, 2)
    assert report.scaled_objective == -3
    assert report.constraints_checked == len(model.constraints)


def test_representation_must_match_the_game(make_game):
    model = build_model(4, BZ_PGI, HALF, 1)
    v = make_game(3, 2, 1, 1, 1)
    with pytest.raises(RepresentationMismatchError):
        evaluate_assignment(model, v, WeightedRepresentation(2, (1, 1, 1, 1)))
    with pytest.raises(RepresentationMismatchError):
        evaluate_assignment(model, v, None)
    # same game, but losing coalitions sit less than 1 below the quota
    with pytest.raises(RepresentationMismatchError):
        evaluate_assignment(model, v, WeightedRepresentation(F(3, 2), (1, F(1, 2), F(1, 2), F(1, 2))))


def test_small_big_m_makes_a_game_infeasible():
    rep = WeightedRepresentation(14, (9, 8, 5, 2, 2, 2, 2))
    model = build_model(7, BZ_PGI, HALF, 1, big_m=10)
    report = evaluate_assignment(model, game_from_weighted(rep), rep)
    assert not report.feasible
    assert {violation.name.split("_")[0] for violation in report.violations} <= {"bigM1", "bigM2"}


def test_read_solution(make_game):
    text = "objective 2\nx_0 0\nx_1 1\nx_2 0\nx_3 1.0\ny_1_1 1\n"
    assert read_solution(text, 2) == make_game(1, 1, 0)
    with pytest.raises(SolutionFormatError):
        read_solution("x_0 0\nx_1 1\n", 2)
    with pytest.raises(SolutionFormatError):
        read_solution(text + "x_4 1\n", 2)


COLLECTIONS = [
    (IndexId.BZ, IndexId.PGI),
    (IndexId.BZ, IndexId.S),
    (IndexId.BZ, IndexId.PGI, IndexId.S),
    (IndexId.JO, IndexId.DP),
    (IndexId.JO, IndexId.SDP),
]


def test_objective_matches_the_convex_index_on_random_triples(weighted_games):
    rng = random.Random(2024)
    for _ in range(200):
        n = rng.randint(3, 5)
        v = rng.choice(weighted_games[n])
        collection = rng.choice(COLLECTIONS)
        raw = [rng.randint(0, 5) for _ in collection]
        raw[0] += 1
        alpha = ConvexWeights(tuple(F(r, sum(raw)) for r in raw))
        i = rng.randint(1, n - 1)
        model = build_model(n, collection, alpha, i, model_class="simple")
        report = evaluate_assignment(model, v)
        combined = convex_index(v, collection, alpha)
        assert report.feasible, (v, collection, report.violations[:3])
        assert report.objective == combined[i + 1] - combined[i], (v, collection, alpha, i)


def test_shift_lower_bounds_split_on_the_last_player():
    model = build_model(4, BZ_PGI, HALF, 2)
    without_last = model.constraint_family("ulow1")
    with_last = model.constraint_family("ulow2")
    assert len(without_last) == len(with_last) == 8
    assert all(not int(c.name.split("_")[1]) & 8 for c in without_last)
    assert all(int(c.name.split("_")[1]) & 8 for c in with_last)
    assert model.constraint_family("ulow") == []
    grand = next(c for c in with_last if c.name == "ulow2_15")
    assert {(coef, var) for coef, var in grand.terms} == {(1, "u_15"), (-1, "x_15"), (1, "x_7")}
