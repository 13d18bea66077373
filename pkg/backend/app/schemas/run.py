"""
Run configuration schema
One RunConfig per CLI invocation; validated before any computation starts.
"""

from typing import List, Optional, Tuple

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from app.core.config import get_settings
from app.core.exceptions import UsageError
from app.models.enumeration import GameFilter, Universe
from app.models.index import IndexId
from app.models.monotonicity import ConvexWeights, parse_collection
from app.services.family_service import FAMILY_IDS

COMMANDS = ("indices", "check-lm", "cost", "enumerate", "polyhedron", "family", "emit-ilp")

# --class tokens: a universe, the class filters, or "all"
UNIVERSE_TOKENS = {"weighted": Universe.WEIGHTED, "complete": Universe.COMPLETE}


class RunConfig(BaseModel):
    """Validated options of one command"""
    command: str = Field(..., description="Subcommand name")
    game: Optional[str] = Field(None, description="Bracket notation or JSON record")
    game_file: Optional[str] = Field(None, description="File with one game per line, '-' for stdin")
    collection: str = Field("bz,pgi", description="Comma-separated index ids, LM index first")
    alpha: Optional[str] = Field(None, description="Comma-separated exact multipliers")
    game_class: str = Field("weighted", description="weighted, complete, all, or filters such as proper,strong")
    n: Optional[int] = Field(None, ge=1, description="Number of players")
    output_format: str = Field("human", description="human, csv or jsonl")
    decimals: int = Field(0, ge=0, le=30, description="Places of the decimal twin columns, 0 for none")
    workers: Optional[int] = Field(None, ge=1, description="Worker processes")
    log_level: Optional[str] = Field(None, description="Overrides LOG_LEVEL")

    method: str = Field("direct", description="Cost: direct or iterative; polyhedron: direct or lazy")
    count_only: bool = False
    emit: Optional[str] = Field(None, description="Stream games as bracket or json")
    table_uniform: bool = False
    table_counts: bool = False
    allow_large: bool = False
    boundary: bool = False
    family: Optional[str] = None
    k: Optional[int] = Field(None, ge=1)
    m: Optional[int] = Field(None, ge=0)
    verify_all: bool = False
    position: int = Field(1, ge=1, description="i of the adjacent pair (i, i+1)")
    model_class: str = "weighted"
    proper: bool = False
    strong: bool = False
    constant_sum: bool = False
    big_m: Optional[int] = Field(None, ge=1)
    integer_weights: bool = False
    check_game: Optional[str] = Field(None, description="Evaluate the model on this weighted game")
    solution: Optional[str] = Field(None, description="Solver output file to read back")

    model_config = {
        "json_schema_extra": {
            "example": {"command": "cost", "collection": "bz,pgi", "n": 5, "game_class": "weighted", "output_format": "csv"}
        }
    }

    @field_validator("command")
    @classmethod
    def known_command(cls, v):
        if v not in COMMANDS:
            raise ValueError(f"unknown command {v}")
        return v

    @field_validator("output_format")
    @classmethod
    def known_format(cls, v):
        if v not in ("human", "csv", "jsonl"):
            raise ValueError("format must be human, csv or jsonl")
        return v

    @field_validator("emit")
    @classmethod
    def known_emit(cls, v):
        if v is not None and v not in ("bracket", "json"):
            raise ValueError("--emit takes bracket or json")
        return v

    @field_validator("alpha")
    @classmethod
    def alpha_in_simplex(cls, v):
        if v is not None:
            ConvexWeights.parse(v)
        return v

    @model_validator(mode="after")
    def required_options(self):
        needs_game = self.command in ("indices", "check-lm")
        if needs_game and not (self.game or self.game_file):
            raise ValueError(f"{self.command} needs a game or --file")
        needs_n = self.command in ("cost", "polyhedron", "enumerate", "emit-ilp")
        if needs_n and self.n is None:
            raise ValueError(f"{self.command} needs --n")
        if self.command == "check-lm" and self.alpha is None:
            raise ValueError("check-lm needs --alpha")
        if self.command == "emit-ilp" and self.alpha is None and self.solution is None:
            raise ValueError("emit-ilp needs --alpha")
        if self.command == "family" and not self.verify_all and self.family is None:
            raise ValueError("family needs a family id or --verify-all")
        if self.family is not None and self.family not in FAMILY_IDS:
            raise ValueError(f"unknown family {self.family}; choose from {', '.join(FAMILY_IDS)}")
        if self.table_uniform and self.table_counts:
            raise ValueError("--table-uniform and --table-counts are exclusive")
        return self

    @classmethod
    def build(cls, **options) -> "RunConfig":
        """Construct from CLI options; settings fill what the options leave out"""
        settings = get_settings()
        if options.get("workers") is None:
            options["workers"] = settings.WORKERS
        if options.get("output_format") is None:
            options["output_format"] = settings.DEFAULT_OUTPUT_FORMAT
        if options.get("decimals") is None:
            options["decimals"] = settings.DEFAULT_DECIMALS
        try:
            return cls(**options)
        except ValidationError as exc:
            first = exc.errors()[0]
            raise UsageError(first.get("msg", str(exc)).removeprefix("Value error, ")) from exc

    # Parsed views

    @property
    def index_collection(self) -> Tuple[IndexId, ...]:
        return parse_collection(self.collection)

    @property
    def weights(self) -> Optional[ConvexWeights]:
        return ConvexWeights.parse(self.alpha) if self.alpha is not None else None

    @property
    def class_selection(self) -> Tuple[Universe, Tuple[GameFilter, ...]]:
        universe = Universe.WEIGHTED
        filters: List[GameFilter] = []
        for token in (t.strip().lower() for t in self.game_class.split(",")):
            if token in ("", "all"):
                continue
            if token in UNIVERSE_TOKENS:
                universe = UNIVERSE_TOKENS[token]
                continue
            try:
                filters.append(GameFilter(token))
            except ValueError as exc:
                choices = ", ".join(list(UNIVERSE_TOKENS) + [f.value for f in GameFilter] + ["all"])
                raise UsageError(f"unknown class {token!r}; choose from {choices}") from exc
        return universe, tuple(filters)
