"""
ILP export service
Builds the binary program that searches a game class for the largest local
monotonicity violation of a combined index, writes it in LP file format,
and checks variable assignments derived from a known game against every
constraint, so the model can be validated without a solver.

Variables, in registration order:

    x_S      S wins
    y_i_S    S is a swing for i
    z_S      S is minimal winning
    u_S      S is shift-minimal winning
    t_i      players i and i+1 are of different type
    b_i_S    Johnston share of i in S
    w_i, q   weights and quota (weighted class only)
"""

import logging
import math
import re
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from app.core.exceptions import (
    PlayerOutOfRangeError,
    RepresentationMismatchError,
    SolutionFormatError,
    UsageError,
)
from app.models.coalition import grand_mask, players_of, popcount
from app.models.game import SimpleGame, WeightedRepresentation
from app.models.ilp import (
    BINARY,
    CONTINUOUS,
    INTEGER,
    MODEL_CLASSES,
    AssignmentReport,
    Constraint,
    ConstraintViolation,
    IlpModel,
    Term,
    Variable,
)
from app.models.index import IndexId
from app.models.monotonicity import ConvexWeights, check_dimensions
from app.services.game_service import (
    desirability_matrix,
    ensure_sorted_complete,
    game_from_table,
    game_from_weighted,
    minimal_mask,
    shift_minimal_mask,
)
from app.services.index_service import swing_table

logger = logging.getLogger(__name__)

MIN_PLAYERS = 2
MAX_PLAYERS = 10
TERMS_PER_LINE = 8


def default_big_m(n: int) -> int:
    """Least integer >= 4n((n+1)/4)^((n+1)/2), exact"""
    # M² = 16 n² (n+1)^(n+1) / 4^(n+1)
    square = Fraction(16 * n * n * (n + 1) ** (n + 1), 4 ** (n + 1))
    m = math.isqrt(square.numerator // square.denominator)
    while m * m < square:
        m += 1
    return m


class _Builder:
    def __init__(self, model: IlpModel):
        self.model = model
        self.order: Dict[str, int] = {}

    def variable(self, name: str, kind: str, lower=Fraction(0), upper=None):
        self.order[name] = len(self.model.variables)
        self.model.variables.append(Variable(name, kind, lower, upper))

    def terms(self, pairs: Iterable[Tuple[object, str]]) -> Tuple[Term, ...]:
        """Merge repeated variables, drop zeros, sort by registration order"""
        merged: Dict[str, Fraction] = {}
        for coef, var in pairs:
            merged[var] = merged.get(var, Fraction(0)) + Fraction(coef)
        ordered = sorted((var for var, coef in merged.items() if coef != 0), key=self.order.__getitem__)
        return tuple((merged[var], var) for var in ordered)

    def add(self, name: str, family: str, pairs: Iterable[Tuple[object, str]], sense: str, rhs):
        self.model.constraints.append(Constraint(name, family, self.terms(pairs), sense, Fraction(rhs)))


def _x(mask: int) -> str:
    return f"x_{mask}"


def _y(i: int, mask: int) -> str:
    return f"y_{i}_{mask}"


def _z(mask: int) -> str:
    return f"z_{mask}"


def _u(mask: int) -> str:
    return f"u_{mask}"


def _t(i: int) -> str:
    return f"t_{i}"


def _b(i: int, mask: int) -> str:
    return f"b_{i}_{mask}"


def _w(i: int) -> str:
    return f"w_{i}"


def _swap(mask: int, out: int, into: int) -> int:
    """Replace player `out` by player `into`"""
    return (mask & ~(1 << (out - 1))) | (1 << (into - 1))


def _objective(n: int, collection: Sequence[IndexId], alpha: ConvexWeights, pair: int) -> List[Tuple[Fraction, str]]:
    """α-weighted P_{i+1} - P_i in model variables"""
    i, j = pair, pair + 1
    size = 1 << n
    pairs: List[Tuple[Fraction, str]] = []
    for a, index_id in zip(alpha.alphas, collection):
        if a == 0:
            continue
        for mask in range(size):
            in_i = bool(mask & (1 << (i - 1)))
            in_j = bool(mask & (1 << (j - 1)))
            sign = int(in_j) - int(in_i)
            share = Fraction(1, popcount(mask)) if mask else Fraction(0)
            if index_id == IndexId.BZ:
                pairs += [(a, _y(j, mask)), (-a, _y(i, mask))]
            elif index_id == IndexId.JO:
                pairs += [(a, _b(j, mask)), (-a, _b(i, mask))]
            elif sign and index_id == IndexId.PGI:
                pairs.append((a * sign, _z(mask)))
            elif sign and index_id == IndexId.S:
                pairs.append((a * sign, _u(mask)))
            elif sign and index_id == IndexId.DP:
                pairs.append((a * sign * share, _z(mask)))
            elif sign and index_id == IndexId.SDP:
                pairs.append((a * sign * share, _u(mask)))
    return pairs


def build_model(
    n: int,
    collection: Sequence[IndexId],
    alpha: ConvexWeights,
    pair: int,
    model_class: str = "weighted",
    proper: bool = False,
    strong: bool = False,
    constant_sum: bool = False,
    big_m: Optional[int] = None,
    integer_weights: bool = False,
) -> IlpModel:
    if not MIN_PLAYERS <= n <= MAX_PLAYERS:
        raise UsageError(f"ILP models are built for {MIN_PLAYERS} <= n <= {MAX_PLAYERS}, got {n}")
    if model_class not in MODEL_CLASSES:
        raise UsageError(f"unknown model class {model_class!r}; choose from {', '.join(MODEL_CLASSES)}")
    collection = tuple(IndexId(c) for c in collection)
    check_dimensions(collection, alpha)
    if not 1 <= pair < n:
        raise PlayerOutOfRangeError(f"pair index {pair} outside 1..{n - 1}")
    if big_m is None:
        big_m = default_big_m(n)
    elif big_m < default_big_m(n):
        logger.warning(f"big-M {big_m} is below the general bound {default_big_m(n)}; the model is exact only if it covers w(N) + 1")

    model = IlpModel(
        n=n, model_class=model_class, proper=proper, strong=strong, constant_sum=constant_sum,
        collection=collection, alpha=alpha, pair=pair, big_m=big_m, integer_weights=integer_weights,
    )
    builder = _Builder(model)
    size = 1 << n
    grand = grand_mask(n)
    players = range(1, n + 1)
    weighted = model_class == "weighted"

    for mask in range(size):
        builder.variable(_x(mask), BINARY)
    for i in players:
        for mask in range(size):
            builder.variable(_y(i, mask), BINARY)
    for mask in range(size):
        builder.variable(_z(mask), BINARY)
    for mask in range(size):
        builder.variable(_u(mask), BINARY)
    for i in range(1, n):
        builder.variable(_t(i), BINARY)
    for i in players:
        for mask in range(size):
            builder.variable(_b(i, mask), CONTINUOUS, Fraction(0), Fraction(1))
    if weighted:
        kind = INTEGER if integer_weights else CONTINUOUS
        for i in players:
            builder.variable(_w(i), kind)
        builder.variable("q", kind, Fraction(1))

    # simple game
    builder.add("fix_empty", "fix", [(1, _x(0))], "=", 0)
    builder.add("fix_grand", "fix", [(1, _x(grand))], "=", 1)
    for mask in range(size):
        for p in players:
            if not mask & (1 << (p - 1)):
                upper = mask | (1 << (p - 1))
                builder.add(f"mono_{mask}_{upper}", "mono", [(1, _x(mask)), (-1, _x(upper))], "<=", 0)

    # completeness: replacing p+1 by p keeps a coalition winning
    if model_class in ("complete", "weighted"):
        for mask in range(size):
            for p in range(1, n):
                if mask & (1 << p) and not mask & (1 << (p - 1)):
                    upper = _swap(mask, p + 1, p)
                    builder.add(f"shift_{mask}_{upper}", "shift", [(1, _x(mask)), (-1, _x(upper))], "<=", 0)

    if weighted:
        for mask in range(size):
            members = [(-1, _w(p)) for p in players_of(mask)]
            builder.add(f"bigM1_{mask}", "bigM1", [(1, "q"), (big_m, _x(mask))] + members, "<=", big_m)
        for mask in range(size):
            members = [(1, _w(p)) for p in players_of(mask)]
            builder.add(f"bigM2_{mask}", "bigM2", [(-big_m, _x(mask))] + members + [(-1, "q")], "<=", -1)

    # one constraint per complement pair, taken at the member without player n
    last = 1 << (n - 1)
    for flag, family, sense in ((proper, "proper", "<="), (strong, "strong", ">="), (constant_sum, "cs", "=")):
        if not flag:
            continue
        for mask in range(size):
            if not mask & last:
                builder.add(f"{family}_{mask}", family, [(1, _x(mask)), (1, _x(grand ^ mask))], sense, 1)

    # swings
    for i in players:
        for mask in range(size):
            if mask & (1 << (i - 1)):
                builder.add(
                    f"ydef_{i}_{mask}", "ydef",
                    [(1, _y(i, mask)), (-1, _x(mask)), (1, _x(mask ^ (1 << (i - 1))))], "=", 0,
                )
            else:
                builder.add(f"ydef0_{i}_{mask}", "ydef0", [(1, _y(i, mask))], "=", 0)

    # minimal winning
    for mask in range(size):
        builder.add(f"zdef1_{mask}", "zdef1", [(1, _z(mask)), (-1, _x(mask))], "<=", 0)
    for mask in range(size):
        for i in players_of(mask):
            builder.add(f"zdef2_{mask}_{i}", "zdef2", [(1, _z(mask)), (1, _x(mask ^ (1 << (i - 1))))], "<=", 1)
    for mask in range(size):
        lower = [(1, _x(mask ^ (1 << (i - 1)))) for i in players_of(mask)]
        builder.add(f"zdef3_{mask}", "zdef3", [(1, _z(mask)), (-1, _x(mask))] + lower, ">=", 0)

    # type separators
    for i in range(1, n):
        pair_bits = (1 << (i - 1)) | (1 << i)
        differences = []
        for mask in range(size):
            if mask & pair_bits:
                continue
            with_i = mask | (1 << (i - 1))
            with_next = mask | (1 << i)
            builder.add(
                f"tsep1_{i}_{mask}", "tsep1",
                [(1, _x(with_i)), (-1, _x(with_next)), (-1, _t(i))], "<=", 0,
            )
            differences += [(1, _x(with_i)), (-1, _x(with_next))]
        builder.add(f"tsep2_{i}", "tsep2", [(-1, _t(i))] + differences, ">=", 0)

    # shift-minimal winning
    for i in range(1, n):
        pair_bits = (1 << (i - 1)) | (1 << i)
        for mask in range(size):
            if mask & pair_bits:
                continue
            with_i = mask | (1 << (i - 1))
            with_next = mask | (1 << i)
            builder.add(f"ueq1_{i}_{mask}", "ueq1", [(1, _u(with_i)), (-1, _u(with_next)), (1, _t(i))], ">=", 0)
            builder.add(f"ueq2_{i}_{mask}", "ueq2", [(1, _u(with_next)), (-1, _u(with_i)), (1, _t(i))], ">=", 0)
    for mask in range(size):
        builder.add(f"ubound_{mask}", "ubound", [(1, _u(mask)), (-1, _z(mask))], "<=", 0)
    for mask in range(size):
        for i in _shiftable(mask, n):
            builder.add(
                f"shift_u_{mask}_{i}", "shift_u",
                [(1, _u(mask)), (-1, _x(mask)), (1, _x(_swap(mask, i, i + 1))), (1, _t(i))], "<=", 1,
            )
    # lower bounds, split on whether player n is in S
    for family, with_last in (("ulow1", False), ("ulow2", True)):
        for mask in range(size):
            if bool(mask & last) != with_last:
                continue
            lower = [(1, _x(_swap(mask, i, i + 1))) for i in _shiftable(mask, n)]
            if with_last:
                lower.append((1, _x(mask ^ last)))
            builder.add(f"{family}_{mask}", family, [(1, _u(mask)), (-1, _x(mask))] + lower, ">=", 0)

    # Johnston shares
    for i in players:
        for mask in range(size):
            builder.add(f"john_b1_{i}_{mask}", "john_b1", [(1, _b(i, mask)), (-1, _y(i, mask))], "<=", 0)
    for mask in range(size):
        for i in players_of(mask):
            for j in players_of(mask):
                if i != j:
                    builder.add(
                        f"john_b2_{i}_{j}_{mask}", "john_b2",
                        [(1, _b(i, mask)), (-1, _b(j, mask)), (-1, _y(i, mask)), (-1, _y(j, mask))], ">=", -2,
                    )
    for mask in range(size):
        builder.add(f"john_b3_{mask}", "john_b3", [(1, _b(i, mask)) for i in players], "<=", 1)
    for i in players:
        for mask in range(size):
            if mask & (1 << (i - 1)):
                shares = [(1, _b(j, mask)) for j in players]
                builder.add(f"john_b4_{i}_{mask}", "john_b4", shares + [(-1, _y(i, mask))], ">=", 0)

    objective = builder.terms(_objective(n, collection, alpha, pair))
    scale = math.lcm(*(coef.denominator for coef, _ in objective)) if objective else 1
    model.objective = objective
    model.objective_scale = scale
    logger.info(f"ILP n={n} {model_class}: {len(model.variables)} variables, {len(model.constraints)} constraints")
    return model


def _shiftable(mask: int, n: int) -> List[int]:
    """Members i != n with i+1 outside the coalition"""
    return [i for i in players_of(mask) if i < n and not mask & (1 << i)]


# LP text

def _number(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else str(value)


def _expression(terms: Sequence[Term], scale: int = 1) -> List[str]:
    parts = []
    for coef, var in terms:
        coef = coef * scale
        sign = "-" if coef < 0 else "+"
        magnitude = abs(coef)
        parts.append(f"{sign} {var}" if magnitude == 1 else f"{sign} {_number(magnitude)} {var}")
    return parts


def _wrap(head: str, parts: List[str], tail: str = "") -> List[str]:
    lines = []
    for start in range(0, max(len(parts), 1), TERMS_PER_LINE):
        chunk = " ".join(parts[start:start + TERMS_PER_LINE])
        lines.append((head if start == 0 else "  ") + chunk)
    lines[-1] += tail
    return lines


def emit_lp_text(model: IlpModel) -> str:
    """LP file text; byte-identical for identical models"""
    flags = [name for name, on in (("proper", model.proper), ("strong", model.strong), ("constant-sum", model.constant_sum)) if on]
    lines = [
        f"\\ lmcost model n={model.n} class={model.model_class} flags={','.join(flags) or 'none'}",
        f"\\ indices={','.join(i.value for i in model.collection)} alpha={model.alpha} pair={model.pair},{model.pair + 1} M={model.big_m}",
        f"\\ objective scaled by {model.objective_scale}",
        "Maximize",
    ]
    objective = _expression(model.objective, model.objective_scale) or ["0 x_0"]
    lines += _wrap(" obj: ", objective)
    lines.append("Subject To")
    for constraint in model.constraints:
        lines += _wrap(f" {constraint.name}: ", _expression(constraint.terms), f" {constraint.sense} {_number(constraint.rhs)}")
    lines.append("Bounds")
    for variable in model.variables:
        if variable.kind == BINARY:
            continue
        if variable.upper is not None:
            lines.append(f" {_number(variable.lower)} <= {variable.name} <= {_number(variable.upper)}")
        else:
            lines.append(f" {variable.name} >= {_number(variable.lower)}")
    lines.append("Binaries")
    binaries = [v.name for v in model.variables if v.kind == BINARY]
    for start in range(0, len(binaries), TERMS_PER_LINE):
        lines.append(" " + " ".join(binaries[start:start + TERMS_PER_LINE]))
    generals = [v.name for v in model.variables if v.kind == INTEGER]
    if generals:
        lines.append("Generals")
        lines.append(" " + " ".join(generals))
    lines.append("End")
    return "\n".join(lines) + "\n"


# Assignment check

def derive_assignment(model: IlpModel, game: SimpleGame, rep: Optional[WeightedRepresentation] = None) -> Dict[str, Fraction]:
    """Values every variable takes for a known game"""
    n = model.n
    if game.n != n:
        raise RepresentationMismatchError(f"model has {n} players, game has {game.n}")
    ensure_sorted_complete(game)
    size = 1 << n
    one, zero = Fraction(1), Fraction(0)
    values: Dict[str, Fraction] = {}
    winning = game.winning
    swings = swing_table(game)
    minimal = minimal_mask(game)
    shift = shift_minimal_mask(game)
    geq = desirability_matrix(game)

    for mask in range(size):
        values[_x(mask)] = one if winning[mask] else zero
    for i in range(1, n + 1):
        for mask in range(size):
            values[_y(i, mask)] = one if swings[i - 1, mask] else zero
    for mask in range(size):
        values[_z(mask)] = one if minimal[mask] else zero
        values[_u(mask)] = one if shift[mask] else zero
    for i in range(1, n):
        values[_t(i)] = zero if geq[i - 1, i] and geq[i, i - 1] else one
    for mask in range(size):
        decisive = int(swings[:, mask].sum())
        for i in range(1, n + 1):
            values[_b(i, mask)] = Fraction(1, decisive) if swings[i - 1, mask] else zero
    if model.weighted:
        if rep is None:
            raise RepresentationMismatchError("the weighted model needs a weighted representation")
        _check_representation(game, rep)
        for i in range(1, n + 1):
            values[_w(i)] = rep.weights[i - 1]
        values["q"] = rep.quota
    return values


def _check_representation(game: SimpleGame, rep: WeightedRepresentation):
    if rep.n != game.n or game_from_weighted(rep) != game:
        raise RepresentationMismatchError(f"{rep} does not induce the given game")
    for mask in range(1 << game.n):
        weight = rep.weight_of(mask)
        if not game.winning[mask] and weight > rep.quota - 1:
            raise RepresentationMismatchError(f"{rep} leaves a gap below 1 between winning and losing coalitions")


def evaluate_assignment(model: IlpModel, game: SimpleGame, rep: Optional[WeightedRepresentation] = None) -> AssignmentReport:
    """Check every constraint on the assignment induced by a game"""
    values = derive_assignment(model, game, rep)
    violations = [
        ConstraintViolation(c.name, c.lhs(values), c.sense, c.rhs)
        for c in model.constraints
        if not c.holds(values)
    ]
    objective = sum((coef * values[var] for coef, var in model.objective), Fraction(0))
    if violations:
        logger.info(f"assignment for {game.key()} violates {len(violations)} constraints, first {violations[0].name}")
    return AssignmentReport(values, violations, objective, model.objective_scale, len(model.constraints))


# Solver output

_SOLUTION_LINE = re.compile(r"^\s*x_(\d+)\s+([01])(?:\.0*)?\s*$")


def read_solution(text: str, n: int) -> SimpleGame:
    """Game from solver lines `x_<mask> <0|1>`; other lines are ignored"""
    size = 1 << n
    table: List[Optional[bool]] = [None] * size
    for line in text.splitlines():
        match = _SOLUTION_LINE.match(line)
        if not match:
            continue
        mask = int(match.group(1))
        if mask >= size:
            raise SolutionFormatError(f"x_{mask} is outside {n} players")
        table[mask] = match.group(2) == "1"
    missing = [mask for mask, value in enumerate(table) if value is None]
    if missing:
        raise SolutionFormatError(f"solution lacks {len(missing)} x values, first x_{missing[0]}")
    return game_from_table(n, table)
