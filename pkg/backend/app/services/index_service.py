"""
Power index service
Raw Banzhaf, Public Good, Shift, Johnston, Deegan-Packel and Shift
Deegan-Packel indices by definitional brute force over all 2^n coalitions.

Raw vectors are the internal currency; normalization is for presentation.
Every value is an exact Fraction: coalitions are grouped by size (or by
number of decisive members) with np.bincount and each group contributes
count/size.
"""

import logging
from fractions import Fraction
from typing import Dict, Iterable, Optional, Tuple

import numpy as np

from app.core.exceptions import ZeroIndexSumError
from app.models.coalition import coalition_indices, membership_table, size_table
from app.models.game import SimpleGame
from app.models.index import IndexId, IndexVector
from app.services.game_service import (
    desirability_matrix,
    minimal_mask,
    shift_minimal_mask,
)

logger = logging.getLogger(__name__)


def swing_table(v: SimpleGame) -> np.ndarray:
    """(n, 2^n) table: row p marks coalitions in which player p+1 is decisive"""
    def compute():
        members = membership_table(v.n)
        indices = coalition_indices(v.n)
        swings = np.stack([
            members[p] & v.winning & ~v.winning[indices ^ (1 << p)]
            for p in range(v.n)
        ])
        swings.setflags(write=False)
        return swings
    return v.cached("swings", compute)


def _share_sums(selection: np.ndarray, divisors: np.ndarray) -> Fraction:
    """Σ 1/divisor over the selected coalitions"""
    counts = np.bincount(divisors[selection])
    return sum((Fraction(int(c), d) for d, c in enumerate(counts) if c and d), Fraction(0))


def raw_banzhaf(v: SimpleGame) -> IndexVector:
    def compute():
        swings = swing_table(v)
        return IndexVector(tuple(Fraction(int(row.sum())) for row in swings), IndexId.BZ)
    return v.cached("index:bz", compute)


def raw_pgi(v: SimpleGame) -> IndexVector:
    def compute():
        minimal = minimal_mask(v)
        members = membership_table(v.n)
        return IndexVector(tuple(Fraction(int((minimal & members[p]).sum())) for p in range(v.n)), IndexId.PGI)
    return v.cached("index:pgi", compute)


def raw_shift(v: SimpleGame) -> IndexVector:
    """Counts of shift-minimal winning coalitions; rejects non-complete games"""
    def compute():
        shift = shift_minimal_mask(v)
        members = membership_table(v.n)
        return IndexVector(tuple(Fraction(int((shift & members[p]).sum())) for p in range(v.n)), IndexId.S)
    return v.cached("index:s", compute)


def raw_johnston(v: SimpleGame) -> IndexVector:
    """Each coalition with decisive members splits one unit equally among them"""
    def compute():
        swings = swing_table(v)
        decisive = swings.sum(axis=0)
        return IndexVector(tuple(_share_sums(swings[p], decisive) for p in range(v.n)), IndexId.JO)
    return v.cached("index:jo", compute)


def raw_deegan_packel(v: SimpleGame) -> IndexVector:
    def compute():
        minimal = minimal_mask(v)
        members = membership_table(v.n)
        sizes = size_table(v.n)
        return IndexVector(tuple(_share_sums(minimal & members[p], sizes) for p in range(v.n)), IndexId.DP)
    return v.cached("index:dp", compute)


def raw_sdp(v: SimpleGame) -> IndexVector:
    """Deegan-Packel over shift-minimal winning coalitions; rejects non-complete games"""
    def compute():
        shift = shift_minimal_mask(v)
        members = membership_table(v.n)
        sizes = size_table(v.n)
        return IndexVector(tuple(_share_sums(shift & members[p], sizes) for p in range(v.n)), IndexId.SDP)
    return v.cached("index:sdp", compute)


_RAW = {
    IndexId.BZ: raw_banzhaf,
    IndexId.PGI: raw_pgi,
    IndexId.S: raw_shift,
    IndexId.JO: raw_johnston,
    IndexId.DP: raw_deegan_packel,
    IndexId.SDP: raw_sdp,
}


def raw_index(v: SimpleGame, index_id: IndexId) -> IndexVector:
    return _RAW[IndexId(index_id)](v)


def index_profile(v: SimpleGame, ids: Iterable[IndexId]) -> Dict[IndexId, IndexVector]:
    """Several raw vectors at once"""
    return {IndexId(i): raw_index(v, i) for i in ids}


def normalize(x: IndexVector) -> IndexVector:
    """Divide by the raw sum"""
    total = x.total()
    if total <= 0:
        raise ZeroIndexSumError(f"cannot normalize {x.name}: values sum to {total}")
    return IndexVector(tuple(value / total for value in x.values), x.index_id, normalized=True, label=x.label)


def index_respects_desirability(v: SimpleGame, x: IndexVector) -> Tuple[bool, Optional[Tuple[int, int]]]:
    """P_i >= P_j for every pair with i ⊒ j; returns the first violating pair otherwise"""
    geq = desirability_matrix(v)
    for i in range(v.n):
        for j in range(v.n):
            if i != j and geq[i, j] and x.values[i] < x.values[j]:
                return False, (i + 1, j + 1)
    return True, None


def decisive_coalition_count(v: SimpleGame) -> int:
    """Coalitions with at least one decisive member"""
    return int(swing_table(v).any(axis=0).sum())
