"""
ILP model data structures
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from app.models.index import IndexId
from app.models.monotonicity import ConvexWeights

BINARY = "binary"
CONTINUOUS = "continuous"
INTEGER = "integer"

MODEL_CLASSES = ("simple", "complete", "weighted")

Term = Tuple[Fraction, str]


@dataclass(frozen=True)
class Variable:
    name: str
    kind: str
    lower: Optional[Fraction] = Fraction(0)
    upper: Optional[Fraction] = None


@dataclass(frozen=True)
class Constraint:
    name: str
    family: str
    terms: Tuple[Term, ...]
    sense: str  # "<=", ">=" or "="
    rhs: Fraction

    def lhs(self, values: Dict[str, Fraction]) -> Fraction:
        return sum((coef * values[var] for coef, var in self.terms), Fraction(0))

    def holds(self, values: Dict[str, Fraction]) -> bool:
        lhs = self.lhs(values)
        if self.sense == "<=":
            return lhs <= self.rhs
        if self.sense == ">=":
            return lhs >= self.rhs
        return lhs == self.rhs


@dataclass
class IlpModel:
    """Binary program whose optimum is the largest LM violation P_{i+1} - P_i over a game class"""
    n: int
    model_class: str
    proper: bool
    strong: bool
    constant_sum: bool
    collection: Tuple[IndexId, ...]
    alpha: ConvexWeights
    pair: int
    big_m: int
    integer_weights: bool = False
    variables: List[Variable] = field(default_factory=list)
    constraints: List[Constraint] = field(default_factory=list)
    objective: Tuple[Term, ...] = ()
    objective_scale: int = 1

    def family(self, prefix: str) -> List[Variable]:
        return [v for v in self.variables if v.name.split("_")[0] == prefix]

    def constraint_family(self, family: str) -> List[Constraint]:
        return [c for c in self.constraints if c.family == family]

    @property
    def weighted(self) -> bool:
        return self.model_class == "weighted"


@dataclass(frozen=True)
class ConstraintViolation:
    name: str
    lhs: Fraction
    sense: str
    rhs: Fraction


@dataclass
class AssignmentReport:
    values: Dict[str, Fraction]
    violations: List[ConstraintViolation]
    objective: Fraction
    objective_scale: int
    constraints_checked: int

    @property
    def feasible(self) -> bool:
        return not self.violations

    @property
    def scaled_objective(self) -> Fraction:
        return self.objective * self.objective_scale
