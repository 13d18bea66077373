"""
Shared pytest fixtures
The testing environment is selected before anything from app is imported.
"""

import os
from pathlib import Path

os.environ.setdefault("LMCOST_ENVIRONMENT", "testing")

from fractions import Fraction  # noqa: E402

import pytest  # noqa: E402

from app.models.enumeration import Universe  # noqa: E402
from app.models.game import WeightedRepresentation  # noqa: E402
from app.services.enumeration_service import list_games  # noqa: E402
from app.services.game_service import game_from_weighted  # noqa: E402

F = Fraction


def weighted(quota, *weights):
    return game_from_weighted(WeightedRepresentation(quota, tuple(weights)))


@pytest.fixture
def make_game():
    """weighted(q, w1, ..., wn) as a SimpleGame"""
    return weighted


@pytest.fixture
def star7():
    return weighted(2, 2, 1, 1, 1, 1, 1, 1)


@pytest.fixture
def seven_player_bz_s():
    return weighted(14, 9, 8, 5, 2, 2, 2, 2)


@pytest.fixture(scope="session")
def weighted_games():
    """All weighted games for n = 1..5, enumerated once"""
    return {n: list_games(n, Universe.WEIGHTED, workers=1) for n in range(1, 6)}


@pytest.fixture(scope="session")
def complete_games():
    return {n: list_games(n, Universe.COMPLETE, workers=1) for n in range(1, 6)}


@pytest.fixture(scope="session")
def fixtures_dir():
    return Path(__file__).parent / "fixtures"
