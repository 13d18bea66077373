"""
lmcost command line
Results go to stdout, logs and errors to stderr.
"""

from typing import Optional

import typer

from app.cli.runner import execute

app = typer.Typer(
    name="lmcost",
    help="Exact power indices, local monotonicity costs and LM polyhedra of simple games.",
    add_completion=False,
    no_args_is_help=True,
)

# Options shared by every command
FORMAT = typer.Option(None, "--format", help="human, csv or jsonl")
DECIMALS = typer.Option(None, "--decimals", help="Add decimal columns with this many places")
WORKERS = typer.Option(None, "--workers", help="Worker processes (default: LMCOST_WORKERS or all cores)")
LOG_LEVEL = typer.Option(None, "--log-level", help="DEBUG, INFO, WARNING or ERROR")
GAME_FILE = typer.Option(None, "--file", help="One game per line; '-' reads stdin")
CLASS = typer.Option("weighted", "--class", help="weighted or complete, plus filters: proper, strong, constant-sum, uniform, flat")
N = typer.Option(None, "--n", help="Number of players")
ALLOW_LARGE = typer.Option(False, "--allow-large", help="Allow n = 8 enumerations")


def _finish(command: str, **options):
    raise typer.Exit(code=execute(dict(options, command=command)))


@app.command()
def indices(
    game: Optional[str] = typer.Argument(None, help="Bracket notation [q;w1,...,wn] or a JSON record"),
    game_file: Optional[str] = GAME_FILE,
    output_format: Optional[str] = FORMAT,
    decimals: Optional[int] = DECIMALS,
    log_level: Optional[str] = LOG_LEVEL,
):
    """Raw and normalized Bz, PGI, S, Jo, DP and SDP vectors"""
    _finish("indices", game=game, game_file=game_file, output_format=output_format, decimals=decimals, log_level=log_level)


@app.command("check-lm")
def check_lm(
    game: Optional[str] = typer.Argument(None, help="Bracket notation [q;w1,...,wn] or a JSON record"),
    game_file: Optional[str] = GAME_FILE,
    collection: str = typer.Option("bz,pgi", "--collection", help="Index ids, LM index first"),
    alpha: Optional[str] = typer.Option(None, "--alpha", help="Exact multipliers summing to 1"),
    output_format: Optional[str] = FORMAT,
    decimals: Optional[int] = DECIMALS,
    log_level: Optional[str] = LOG_LEVEL,
):
    """Check a convex combination for local monotonicity pair by pair"""
    _finish(
        "check-lm", game=game, game_file=game_file, collection=collection, alpha=alpha,
        output_format=output_format, decimals=decimals, log_level=log_level,
    )


@app.command()
def cost(
    collection: str = typer.Option("bz,pgi", "--collection", "--pair", help="Index ids, LM index first"),
    n: Optional[int] = N,
    game_class: str = CLASS,
    method: str = typer.Option("direct", "--method", help="direct or iterative"),
    allow_large: bool = ALLOW_LARGE,
    output_format: Optional[str] = FORMAT,
    decimals: Optional[int] = DECIMALS,
    workers: Optional[int] = WORKERS,
    log_level: Optional[str] = LOG_LEVEL,
):
    """Smallest alpha1 keeping every game of the class locally monotone"""
    _finish(
        "cost", collection=collection, n=n, game_class=game_class, method=method, allow_large=allow_large,
        output_format=output_format, decimals=decimals, workers=workers, log_level=log_level,
    )


@app.command("enumerate")
def enumerate_games(
    n: Optional[int] = typer.Option(None, "--n", help="Number of players (largest n for the tables)"),
    game_class: str = CLASS,
    count_only: bool = typer.Option(False, "--count-only", help="Print the count only"),
    emit: Optional[str] = typer.Option(None, "--emit", help="Stream games as bracket or json"),
    table_uniform: bool = typer.Option(False, "--table-uniform", help="Uniform complete and weighted counts for 1..n"),
    table_counts: bool = typer.Option(False, "--table-counts", help="All counts for 1..n"),
    allow_large: bool = ALLOW_LARGE,
    output_format: Optional[str] = FORMAT,
    workers: Optional[int] = WORKERS,
    log_level: Optional[str] = LOG_LEVEL,
):
    """List or count complete and weighted games"""
    _finish(
        "enumerate", n=n, game_class=game_class, count_only=count_only, emit=emit,
        table_uniform=table_uniform, table_counts=table_counts, allow_large=allow_large,
        output_format=output_format, workers=workers, log_level=log_level,
    )


@app.command()
def polyhedron(
    collection: str = typer.Option("bz,pgi,s", "--collection", help="Two or three index ids, LM index first"),
    n: Optional[int] = N,
    game_class: str = CLASS,
    method: str = typer.Option("direct", "--method", help="direct or lazy"),
    boundary: bool = typer.Option(False, "--boundary", help="Print the polygon boundary in (alpha2, alpha3)"),
    output_format: Optional[str] = FORMAT,
    decimals: Optional[int] = DECIMALS,
    workers: Optional[int] = WORKERS,
    log_level: Optional[str] = LOG_LEVEL,
):
    """Vertices of the set of LM-preserving multipliers"""
    _finish(
        "polyhedron", collection=collection, n=n, game_class=game_class, method=method, boundary=boundary,
        output_format=output_format, decimals=decimals, workers=workers, log_level=log_level,
    )


@app.command()
def family(
    family_id: Optional[str] = typer.Argument(None, help="star, proper, constant-sum, bz-shift, jo-dp or jo-sdp"),
    n: Optional[int] = N,
    k: Optional[int] = typer.Option(None, "--k", help="Family parameter k"),
    m: Optional[int] = typer.Option(None, "--m", help="Family parameter m"),
    verify_all: bool = typer.Option(False, "--verify-all", help="Verify the whole witness catalog"),
    output_format: Optional[str] = FORMAT,
    decimals: Optional[int] = DECIMALS,
    workers: Optional[int] = WORKERS,
    log_level: Optional[str] = LOG_LEVEL,
):
    """Build a witness game and compare its predicted values with computed ones"""
    _finish(
        "family", family=family_id, n=n, k=k, m=m, verify_all=verify_all,
        output_format=output_format, decimals=decimals, workers=workers, log_level=log_level,
    )


@app.command("emit-ilp")
def emit_ilp(
    n: Optional[int] = N,
    collection: str = typer.Option("bz,pgi", "--collection", help="Index ids of the combination"),
    alpha: Optional[str] = typer.Option(None, "--alpha", help="Exact multipliers summing to 1"),
    position: int = typer.Option(1, "--position", help="i of the adjacent pair (i, i+1)"),
    model_class: str = typer.Option("weighted", "--model-class", help="simple, complete or weighted"),
    proper: bool = typer.Option(False, "--proper"),
    strong: bool = typer.Option(False, "--strong"),
    constant_sum: bool = typer.Option(False, "--constant-sum"),
    big_m: Optional[int] = typer.Option(None, "--big-m", help="Override the weight bound"),
    integer_weights: bool = typer.Option(False, "--integer-weights", help="Declare w and q general integers"),
    check_game: Optional[str] = typer.Option(None, "--check", help="Evaluate the model on this weighted game"),
    solution: Optional[str] = typer.Option(None, "--solution", help="Read a solver solution file back into a game"),
    output_format: Optional[str] = FORMAT,
    decimals: Optional[int] = DECIMALS,
    log_level: Optional[str] = LOG_LEVEL,
):
    """Write the violation-maximizing program in LP format"""
    _finish(
        "emit-ilp", n=n, collection=collection, alpha=alpha, position=position, model_class=model_class,
        proper=proper, strong=strong, constant_sum=constant_sum, big_m=big_m, integer_weights=integer_weights,
        check_game=check_game, solution=solution, output_format=output_format, decimals=decimals, log_level=log_level,
    )


def main():
    app(prog_name="lmcost")
