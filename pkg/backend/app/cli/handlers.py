"""
Command handlers
Each handler turns a validated RunConfig into a result table (or text) on
the output stream and returns the exit code.
"""

import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path
from typing import List, TextIO, Tuple

from app.core.exceptions import UsageError
from app.models.game import SimpleGame
from app.models.index import COMPLETE_ONLY, IndexId
from app.schemas.game import GameRecord, WeightedGameSpec, parse_game
from app.schemas.run import RunConfig
from app.services.enumeration_service import (
    count_games,
    count_table,
    count_uniform_table,
    format_game,
    list_games,
)
from app.services.family_service import family_by_id, verify_catalog, verify_instance
from app.services.game_service import classify, describe_minimal_winning, ensure_sorted_complete, is_complete
from app.services.ilp_service import build_model, emit_lp_text, evaluate_assignment, read_solution
from app.services.index_service import normalize, raw_index
from app.services.monotonicity_service import convex_index, cost_for_class
from app.services.output_service import frame, write_frame, write_lines
from app.services.polyhedron_service import polygon_boundary, polyhedron_for_class

logger = logging.getLogger(__name__)


def _read_games(config: RunConfig) -> List[Tuple[str, SimpleGame]]:
    if config.game:
        return [(config.game.strip(), parse_game(config.game))]
    if config.game_file == "-":
        lines = sys.stdin.read().splitlines()
    else:
        path = Path(config.game_file)
        if not path.is_file():
            raise UsageError(f"game file {path} does not exist")
        lines = path.read_text(encoding="utf-8").splitlines()
    games = [
        (line.strip(), parse_game(line))
        for line in lines
        if line.strip() and not line.strip().startswith("#")
    ]
    if not games:
        raise UsageError("the game input is empty")
    return games


def indices(config: RunConfig, stream: TextIO) -> int:
    games = _read_games(config)
    width = max(v.n for _, v in games)
    players = [str(p) for p in range(1, width + 1)]
    rows = []
    for label, v in games:
        complete = is_complete(v).is_complete
        for index_id in IndexId:
            if index_id in COMPLETE_ONLY and not complete:
                logger.warning(f"{label} is not complete; skipping {index_id.label}")
                continue
            raw = raw_index(v, index_id)
            for kind, vector in (("raw", raw), ("normalized", normalize(raw))):
                row = {"game": label, "index": index_id, "kind": kind}
                row.update({str(p): vector[p] for p in range(1, v.n + 1)})
                rows.append(row)
    df = frame(rows, ["game", "index", "kind"] + players, config.decimals, exact=players)
    write_frame(df, config.output_format, stream, title="Raw and normalized power indices")
    return 0


def check_lm(config: RunConfig, stream: TextIO) -> int:
    collection = config.index_collection
    alpha = config.weights
    rows = []
    for label, v in _read_games(config):
        ensure_sorted_complete(v)
        combined = convex_index(v, collection, alpha)
        for i in range(1, v.n):
            increase = combined[i + 1] - combined[i]
            rows.append({
                "game": label,
                "i": i,
                "p_i": combined[i],
                "p_next": combined[i + 1],
                "increase": increase,
                "monotone": increase <= 0,
            })
    df = frame(rows, ["game", "i", "p_i", "p_next", "increase", "monotone"], config.decimals, exact=["p_i", "p_next", "increase"])
    write_frame(df, config.output_format, stream, title=f"Local monotonicity of {combined.name}")
    return 0


def _cost_row(config: RunConfig, result) -> dict:
    found = result.value > 0 and result.witness_game is not None
    return {
        "collection": ",".join(c.value for c in result.collection),
        "n": config.n,
        "class": config.game_class,
        "cost": result.value,
        "witness": format_game(result.witness_game) if found else "",
        "i": result.witness_pair[0] if found else None,
    }


def cost(config: RunConfig, stream: TextIO) -> int:
    collection = config.index_collection
    universe, filters = config.class_selection
    result, trace = cost_for_class(
        config.n, collection, universe, filters, config.method, config.workers, config.allow_large,
    )
    results = [result]
    if len(collection) > 2 and result.pair_costs:
        results = [result.pair_costs[h] for h in collection[1:]] + [result]
    for step in trace:
        logger.info(f"alpha1 {step.alpha1} -> {step.next_alpha1} (violation {step.violation} at pair {step.witness_pair})")
    df = frame([_cost_row(config, r) for r in results], ["collection", "n", "class", "cost", "witness", "i"], config.decimals, exact=["cost"])
    write_frame(df, config.output_format, stream, title="Cost of local monotonicity")
    return 0


def enumerate_games(config: RunConfig, stream: TextIO) -> int:
    universe, filters = config.class_selection
    if config.table_counts:
        rows = [asdict(row) for row in count_table(config.n, config.workers, config.allow_large)]
        columns = ["n", "complete", "weighted", "uniform_complete", "uniform_weighted"]
        write_frame(frame(rows, columns), config.output_format, stream, title="Game counts")
        return 0
    if config.table_uniform:
        rows = [
            {"n": n, "uniform_complete": uc, "uniform_weighted": uw}
            for n, uc, uw in count_uniform_table(config.n, config.workers)
        ]
        write_frame(frame(rows, ["n", "uniform_complete", "uniform_weighted"]), config.output_format, stream, title="Uniform game counts")
        return 0
    if config.count_only:
        count = count_games(config.n, universe, filters, config.workers, config.allow_large)
        rows = [{"n": config.n, "class": config.game_class, "count": count}]
        write_frame(frame(rows, ["n", "class", "count"]), config.output_format, stream, title="Game count")
        return 0

    games = list_games(config.n, universe, filters, config.workers, config.allow_large)
    if config.emit == "bracket":
        write_lines((format_game(v) for v in games), stream)
    elif config.emit == "json":
        write_lines(
            (json.dumps(GameRecord(n=v.n, minimal_winning=describe_minimal_winning(v)).model_dump()) for v in games),
            stream,
        )
    else:
        rows = [
            {"#": k, "game": format_game(v), "classes": ",".join(classify(v).flags())}
            for k, v in enumerate(games, start=1)
        ]
        write_frame(frame(rows, ["#", "game", "classes"]), config.output_format, stream, title=f"{universe.value} games, n={config.n}")
    return 0


def polyhedron(config: RunConfig, stream: TextIO) -> int:
    collection = config.index_collection
    universe, filters = config.class_selection
    poly, trace = polyhedron_for_class(config.n, collection, universe, filters, config.method, config.workers)
    for step in trace:
        logger.info(f"round {step.round}: cut {step.d} from pair {step.certificate.pair} of {format_game(step.certificate.game)}")
    names = [c.value for c in collection]
    if config.boundary:
        rows = [{"point": k, names[1]: a2, names[2]: a3} for k, (a2, a3) in enumerate(polygon_boundary(poly), start=1)]
        columns = ["point", names[1], names[2]]
    else:
        rows = [dict({"vertex": k}, **dict(zip(names, vertex))) for k, vertex in enumerate(poly.vertices, start=1)]
        columns = ["vertex"] + names
    df = frame(rows, columns, config.decimals, exact=columns[1:])
    write_frame(df, config.output_format, stream, title=f"LM polyhedron, n={config.n}")
    return 0


def family(config: RunConfig, stream: TextIO) -> int:
    if config.verify_all:
        reports = verify_catalog(workers=config.workers)
    else:
        reports = [verify_instance(family_by_id(config.family, config.n, config.k, config.m))]
    rows = []
    for report in reports:
        instance = report.instance
        for row in report.rows:
            rows.append({
                "family": row.family_id, "game": row.game, "index": row.index_id, "player": row.player,
                "predicted": row.predicted, "computed": row.computed, "match": row.match, "disputed": row.disputed,
            })
        rows.append({
            "family": instance.family_id, "game": instance.label, "index": "threshold", "player": instance.pair,
            "predicted": instance.predicted_bound, "computed": report.computed_bound,
            "match": report.bound_match, "disputed": instance.disputed,
        })
    columns = ["family", "game", "index", "player", "predicted", "computed", "match", "disputed"]
    write_frame(frame(rows, columns, config.decimals, exact=["predicted", "computed"]), config.output_format, stream, title="Witness verification")
    failed = [report.instance.label for report in reports if not report.passed]
    if failed:
        logger.error(f"verification failed for {', '.join(failed)}")
        return 1
    return 0


def emit_ilp(config: RunConfig, stream: TextIO) -> int:
    if config.solution:
        path = Path(config.solution)
        if not path.is_file():
            raise UsageError(f"solution file {path} does not exist")
        v = read_solution(path.read_text(encoding="utf-8"), config.n)
        write_lines([format_game(v)], stream)
        return 0

    model = build_model(
        config.n, config.index_collection, config.weights, config.position,
        model_class=config.model_class, proper=config.proper, strong=config.strong,
        constant_sum=config.constant_sum, big_m=config.big_m, integer_weights=config.integer_weights,
    )
    if not config.check_game:
        stream.write(emit_lp_text(model))
        return 0

    spec = WeightedGameSpec.parse(config.check_game)
    report = evaluate_assignment(model, spec.to_game(), spec.representation())
    rows = [{
        "game": config.check_game.strip(),
        "constraints": report.constraints_checked,
        "violated": len(report.violations),
        "objective": report.objective,
        "scaled_objective": report.scaled_objective,
        "feasible": report.feasible,
    }]
    columns = ["game", "constraints", "violated", "objective", "scaled_objective", "feasible"]
    write_frame(frame(rows, columns, config.decimals, exact=["objective"]), config.output_format, stream, title="Model check")
    for violation in report.violations:
        logger.warning(f"{violation.name}: {violation.lhs} {violation.sense} {violation.rhs} fails")
    return 0 if report.feasible else 1


HANDLERS = {
    "indices": indices,
    "check-lm": check_lm,
    "cost": cost,
    "enumerate": enumerate_games,
    "polyhedron": polyhedron,
    "family": family,
    "emit-ilp": emit_ilp,
}
