"""
Equitable sets for the tubular datum of G_{p,q}.

A multiset S of nonzero integer vectors is equitable when it generates a
finite-index sublattice of Z^2 and balances intersection numbers against the
edge vectors (q, 0), (p, 1), (p, -1).
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations_with_replacement
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union

from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors

from ..algebra.presentations import check_pq
from ..exceptions import ParameterError

logger = logging.getLogger(__name__)

Index = Union[int, float]


@dataclass(frozen=True, order=True)
class IntVector:
    u: int
    v: int

    @property
    def is_zero(self) -> bool:
        return self.u == 0 and self.v == 0

    def normalized(self) -> "IntVector":
        """Sign-normalize so the first nonzero coordinate is positive."""
        if self.u < 0 or (self.u == 0 and self.v < 0):
            return IntVector(-self.u, -self.v)
        return self

    def as_tuple(self) -> Tuple[int, int]:
        return (self.u, self.v)


@dataclass(frozen=True)
class EquitableCandidate:
    vectors: Tuple[IntVector, ...]

    def __post_init__(self) -> None:
        if not self.vectors:
            raise ParameterError("an equitable candidate needs at least one vector")
        if any(vec.is_zero for vec in self.vectors):
            raise ParameterError("an equitable candidate cannot contain the zero vector")

    @classmethod
    def of(cls, pairs: Iterable[Tuple[int, int]]) -> "EquitableCandidate":
        return cls(tuple(IntVector(u, v) for u, v in pairs))

    def as_tuples(self) -> List[Tuple[int, int]]:
        return [vec.as_tuple() for vec in self.vectors]


class Verdict(str, Enum):
    FEASIBLE = "Feasible"
    INFEASIBLE = "Infeasible"


@dataclass(frozen=True)
class StarSums:
    sum_q: int
    sum_minus: int
    sum_plus: int

    @property
    def holds(self) -> bool:
        return self.sum_q == self.sum_minus == self.sum_plus


@dataclass(frozen=True)
class Certificate:
    """Feasible: candidate, equal (star) sums and a finite index. Infeasible: the inequality trace."""

    p: int
    q: int
    verdict: Verdict
    candidate: Optional[EquitableCandidate] = None
    sums: Optional[StarSums] = None
    lattice_index: Optional[int] = None
    trace: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def feasible(self) -> bool:
        return self.verdict is Verdict.FEASIBLE

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p": self.p,
            "q": self.q,
            "verdict": self.verdict.value,
            "set": self.candidate.as_tuples() if self.candidate else None,
            "sums": [self.sums.sum_q, self.sums.sum_minus, self.sums.sum_plus] if self.sums else None,
            "index": self.lattice_index,
            "trace": list(self.trace),
        }


def edge_vectors(p: int, q: int) -> Tuple[IntVector, IntVector, IntVector]:
    """Edge classes of G_{p,q}: (q, 0), (p, 1), (p, -1)."""
    check_pq(p, q)
    return IntVector(q, 0), IntVector(p, 1), IntVector(p, -1)


def intersection_number(x: IntVector, y: IntVector) -> int:
    """#[x, y] = |x.u * y.v - x.v * y.u|."""
    return abs(x.u * y.v - x.v * y.u)


def lattice_index(S: EquitableCandidate) -> Index:
    """
    Index of the sublattice of Z^2 generated by S.

    Product of the invariant factors of the 2 x k generator matrix, or
    ``math.inf`` when the vectors span a rank < 2 lattice.
    """
    rows = [[ZZ(vec.u) for vec in S.vectors], [ZZ(vec.v) for vec in S.vectors]]
    matrix = DomainMatrix(rows, (2, len(S.vectors)), ZZ)
    factors = [abs(int(f)) for f in invariant_factors(matrix) if f != 0]
    if len(factors) < 2:
        return math.inf
    return factors[0] * factors[1]


def star_condition(p: int, q: int, S: EquitableCandidate) -> StarSums:
    """The three sums sum|q v|, sum|p v - u|, sum|p v + u| over S."""
    edge_q, edge_minus, edge_plus = edge_vectors(p, q)
    return StarSums(
        sum(intersection_number(edge_q, vec) for vec in S.vectors),
        sum(intersection_number(edge_minus, vec) for vec in S.vectors),
        sum(intersection_number(edge_plus, vec) for vec in S.vectors),
    )


def validate_certificate(cert: Certificate) -> bool:
    """Re-check a Feasible certificate from scratch; Infeasible ones must carry a trace."""
    if not cert.feasible:
        return bool(cert.trace)
    sums = star_condition(cert.p, cert.q, cert.candidate)
    index = lattice_index(cert.candidate)
    return sums.holds and sums == cert.sums and index == cert.lattice_index and index != math.inf


def _infeasibility_trace(p: int, q: int) -> Tuple[str, ...]:
    return (
        f"suppose S = {{(u_i, v_i)}} satisfies the balance condition for p={p}, q={q}",
        "sum|p v_i - u_i| + sum|p v_i + u_i| >= sum 2|p v_i|  (triangle inequality)",
        f"sum 2|p v_i| = {2 * p} sum|v_i| >= {2 * q} sum|v_i| = 2 sum|q v_i|  (since p={p} > q={q})",
        "balance makes both sides equal to 2 sum|q v_i|, so every inequality is an equality",
        f"equality in {2 * p} sum|v_i| >= {2 * q} sum|v_i| with p > q forces every v_i = 0",
        "then sum|q v_i| = 0 while sum|p v_i - u_i| = sum|u_i| > 0 because some u_i != 0",
        "contradiction: no equitable set exists",
    )


def decide_equitable(p: int, q: int) -> Certificate:
    """Feasible with {(q, 1), (q, -1)} when p <= q, otherwise Infeasible with the inequality trace."""
    check_pq(p, q)
    if p <= q:
        candidate = EquitableCandidate.of([(q, 1), (q, -1)])
        sums = star_condition(p, q, candidate)
        index = lattice_index(candidate)
        return Certificate(p, q, Verdict.FEASIBLE, candidate, sums, int(index))
    return Certificate(p, q, Verdict.INFEASIBLE, trace=_infeasibility_trace(p, q))


def canonical_vectors(coord_bound: int) -> List[IntVector]:
    """Sign-normalized nonzero vectors with |u|, |v| <= bound, ordered by (max norm, u, v)."""
    vectors = {
        IntVector(u, v).normalized()
        for u in range(-coord_bound, coord_bound + 1)
        for v in range(-coord_bound, coord_bound + 1)
        if (u, v) != (0, 0)
    }
    return sorted(vectors, key=lambda vec: (max(abs(vec.u), abs(vec.v)), vec.u, vec.v))


def exhaustive_search(
    p: int, q: int, coord_bound: int, max_size: int
) -> Optional[EquitableCandidate]:
    """
    Scan multisets of at most ``max_size`` canonical vectors for an equitable set.

    Multisets are tried by size, then in the order of ``canonical_vectors``.
    Returns the first candidate whose sums agree and whose lattice index is
    finite, or None.
    """
    check_pq(p, q)
    if coord_bound < 1 or max_size < 1:
        raise ParameterError("search bounds must be at least 1")
    vectors = canonical_vectors(coord_bound)
    edge_q, edge_minus, edge_plus = edge_vectors(p, q)
    weights = [
        (
            intersection_number(edge_q, vec),
            intersection_number(edge_minus, vec),
            intersection_number(edge_plus, vec),
        )
        for vec in vectors
    ]
    examined = 0
    for size in range(1, max_size + 1):
        for combo in combinations_with_replacement(range(len(vectors)), size):
            examined += 1
            sum_q = sum(weights[i][0] for i in combo)
            if sum_q != sum(weights[i][1] for i in combo) or sum_q != sum(weights[i][2] for i in combo):
                continue
            candidate = EquitableCandidate(tuple(vectors[i] for i in combo))
            if lattice_index(candidate) != math.inf:
                logger.debug(f"exhaustive_search(p={p}, q={q}) hit after {examined} multisets")
                return candidate
    logger.debug(f"exhaustive_search(p={p}, q={q}) found nothing in {examined} multisets")
    return None
