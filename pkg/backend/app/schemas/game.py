"""
Game input schemas
Bracket notation [q;w1,...,wn] and JSON game records
"""

import json
import re
from fractions import Fraction
from typing import Iterable, Iterator, List

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from app.core.exceptions import MalformedGameError
from app.models.game import SimpleGame, WeightedRepresentation
from app.services.game_service import game_from_minimal_winning, game_from_weighted

_NUMBER = r"\s*-?\d+(?:/\d+)?\s*"
_BRACKET = re.compile(rf"^\[({_NUMBER});({_NUMBER}(?:,{_NUMBER})*)\]$")


class WeightedGameSpec(BaseModel):
    """Weighted game in bracket notation"""
    quota: Fraction = Field(..., description="Quota q > 0")
    weights: List[Fraction] = Field(..., min_length=1, description="Non-negative weights, player 1 first")

    model_config = {
        "arbitrary_types_allowed": True,
        "json_schema_extra": {
            "example": {"quota": "14", "weights": ["9", "8", "5", "2", "2", "2", "2"]}
        },
    }

    @field_validator("quota", mode="before")
    @classmethod
    def parse_quota(cls, v):
        return Fraction(str(v).strip())

    @field_validator("weights", mode="before")
    @classmethod
    def parse_weights(cls, v):
        return [Fraction(str(w).strip()) for w in v]

    @classmethod
    def parse(cls, text: str) -> "WeightedGameSpec":
        match = _BRACKET.match(text.strip().replace(" ", ""))
        if not match:
            raise MalformedGameError(f"expected [q;w1,...,wn], got {text!r}")
        try:
            return cls(quota=match.group(1), weights=match.group(2).split(","))
        except (ValidationError, ValueError, ZeroDivisionError) as exc:
            raise MalformedGameError(f"bad bracket notation {text!r}: {exc}") from exc

    def representation(self) -> WeightedRepresentation:
        return WeightedRepresentation(self.quota, tuple(self.weights))

    def to_game(self) -> SimpleGame:
        return game_from_weighted(self.representation())


class GameRecord(BaseModel):
    """Simple game given by its minimal winning coalitions"""
    n: int = Field(..., ge=1, description="Number of players")
    minimal_winning: List[List[int]] = Field(..., description="Minimal winning coalitions, 1-based players")

    model_config = {
        "json_schema_extra": {
            "example": {"n": 4, "minimal_winning": [[1, 2], [1, 3, 4]]}
        }
    }

    @model_validator(mode="after")
    def check_players(self):
        for coalition in self.minimal_winning:
            if any(p < 1 or p > self.n for p in coalition):
                raise ValueError(f"coalition {coalition} names a player outside 1..{self.n}")
        return self

    def to_game(self) -> SimpleGame:
        return game_from_minimal_winning(self.n, [tuple(c) for c in self.minimal_winning])


def parse_game(text: str) -> SimpleGame:
    """Game from bracket notation or a JSON record"""
    text = text.strip()
    if text.startswith("["):
        return WeightedGameSpec.parse(text).to_game()
    if text.startswith("{"):
        try:
            return GameRecord.model_validate(json.loads(text)).to_game()
        except (ValidationError, ValueError) as exc:
            raise MalformedGameError(f"bad game record: {exc}") from exc
    raise MalformedGameError(f"expected bracket notation or a JSON record, got {text!r}")


def parse_games(lines: Iterable[str]) -> Iterator[SimpleGame]:
    """One game per non-empty line; lines starting with # are skipped"""
    for line in lines:
        line = line.strip()
        if line and not line.startswith("#"):
            yield parse_game(line)
