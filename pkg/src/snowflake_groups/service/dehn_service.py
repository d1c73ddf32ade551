"""
Desk-scale estimates of the Dehn function exponent: a bounded van Kampen area
search, area profiles over short trivial words, witness-based distortion
slopes and a density search for exponents.
"""

import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterator, List, Optional, Tuple

import pandas as pd
from scipy import stats

from ..algebra.hnn import witness_profile
from ..algebra.presentations import Presentation, check_pq
from ..algebra.words import Word, free_reduce, min_rotation_key
from ..config.limits_config import Limits
from ..exceptions import NotFoundError, ParameterError

logger = logging.getLogger(__name__)

Signed = Tuple[int, ...]


@dataclass
class AreaProfile:
    """Per length n: largest minimal area over trivial words of length <= n."""

    rows: List[Dict[str, int]] = field(default_factory=list)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            self.rows,
            columns=["n", "max_area", "words_examined", "trivial_words", "unknown_areas"],
        )

    def max_area(self, n: int) -> int:
        for row in self.rows:
            if row["n"] == n:
                return row["max_area"]
        raise KeyError(n)


@dataclass(frozen=True)
class ExponentReport:
    p: int
    q: int
    ratio: Fraction
    alpha: float
    dehn_exponent: float
    slope_samples: Tuple[float, ...]
    fitted_slope: float
    witness_limit: float

    def to_dict(self) -> Dict[str, object]:
        return {
            "p": self.p,
            "q": self.q,
            "ratio": f"{self.ratio.numerator}/{self.ratio.denominator}",
            "alpha": self.alpha,
            "dehn_exponent": self.dehn_exponent,
            "slope_samples": list(self.slope_samples),
            "fitted_slope": self.fitted_slope,
            "witness_limit": self.witness_limit,
        }


def _cyclic_core(letters: List[int]) -> Signed:
    start, end = 0, len(letters)
    while end - start >= 2 and letters[start] == -letters[end - 1]:
        start += 1
        end -= 1
    return tuple(letters[start:end])


def _relator_variants(P: Presentation) -> Dict[int, List[Signed]]:
    """Every rotation of every relator and its inverse, keyed by last letter."""
    variants = set()
    for relator in P.relators:
        for signed in (relator.to_signed(), relator.inverse().to_signed()):
            n = len(signed)
            for i in range(n):
                variants.add(signed[i:] + signed[:i])
    by_last: Dict[int, List[Signed]] = defaultdict(list)
    for variant in sorted(variants):
        by_last[variant[-1]].append(variant)
    return by_last


def _apply_cells(state: Signed, variants: Dict[int, List[Signed]], cap: int) -> Iterator[Signed]:
    """States reachable by one 2-cell sharing at least one edge with the boundary."""
    n = len(state)
    for i in range(n):
        rot = state[i:] + state[:i]
        for cell in variants.get(-rot[0], ()):
            overlap = 0
            limit = min(len(cell), n)
            while overlap < limit and cell[-1 - overlap] == -rot[overlap]:
                overlap += 1
            core = _cyclic_core(list(cell[: len(cell) - overlap]) + list(rot[overlap:]))
            if len(core) > cap:
                continue
            yield min_rotation_key(core)


def min_area(P: Presentation, w: Word, limits: Optional[Limits] = None) -> Optional[int]:
    """
    Minimal number of relator cells needed to reduce ``w`` to the empty word.

    Breadth-first search over cyclic words: each step glues one relator
    cell along at least one boundary edge, then freely and cyclically
    reduces. Intermediate words longer than ``len(w) + limits.length_slack``
    are discarded.

    Args:
        P: presentation supplying the cells
        w: freely reduced word, expected to be trivial
        limits: max_depth, max_states and length_slack caps

    Returns:
        The area, or None when a limit was hit first (area unknown)
    """
    limits = limits or Limits.from_env()
    start = min_rotation_key(_cyclic_core(list(free_reduce(w).to_signed())))
    if not start:
        return 0
    cap = len(start) + limits.length_slack
    variants = _relator_variants(P)
    seen = {start}
    frontier = [start]
    for depth in range(1, limits.max_depth + 1):
        next_frontier = []
        for state in frontier:
            for child in _apply_cells(state, variants, cap):
                if not child:
                    logger.debug(f"min_area: filled at depth {depth} after {len(seen)} states")
                    return depth
                if child in seen:
                    continue
                seen.add(child)
                if len(seen) > limits.max_states:
                    logger.warning(f"min_area: state limit {limits.max_states} reached")
                    return None
                next_frontier.append(child)
        if not next_frontier:
            return None
        frontier = next_frontier
    logger.debug(f"min_area: depth limit {limits.max_depth} reached")
    return None


def reduced_words(ngens: int, length: int) -> Iterator[Signed]:
    """All freely reduced words of exactly ``length`` letters, as signed ints."""
    letters = [s * (g + 1) for g in range(ngens) for s in (1, -1)]

    def extend(prefix: List[int]) -> Iterator[Signed]:
        if len(prefix) == length:
            yield tuple(prefix)
            return
        for letter in letters:
            if prefix and prefix[-1] == -letter:
                continue
            prefix.append(letter)
            yield from extend(prefix)
            prefix.pop()

    yield from extend([])


def area_profile(
    P: Presentation,
    L: int,
    oracle: Callable[[Word], bool],
    limits: Optional[Limits] = None,
) -> AreaProfile:
    """
    Largest minimal area over trivial freely reduced words of length <= n, for n = 1..L.

    Triviality comes from ``oracle`` (a Britton word-problem solver); areas
    are cached by cyclic class since area is conjugation invariant.
    """
    if L < 1:
        raise ParameterError("profile length must be at least 1")
    limits = limits or Limits.from_env()
    cache: Dict[Signed, Optional[int]] = {}
    profile = AreaProfile()
    running_max = 0
    for n in range(1, L + 1):
        examined = trivial = unknown = 0
        for signed in reduced_words(len(P.alphabet), n):
            examined += 1
            word = Word.from_signed(signed)
            if not oracle(word):
                continue
            trivial += 1
            key = min_rotation_key(_cyclic_core(list(signed)))
            if key not in cache:
                cache[key] = min_area(P, word, limits)
            area = cache[key]
            if area is None:
                unknown += 1
            else:
                running_max = max(running_max, area)
        profile.rows.append(
            {
                "n": n,
                "max_area": running_max,
                "words_examined": examined,
                "trivial_words": trivial,
                "unknown_areas": unknown,
            }
        )
        logger.info(f"area_profile: n={n} examined={examined} trivial={trivial} max_area={running_max}")
    return profile


def alpha_exponent(p: int, q: int, levels: int = 10) -> ExponentReport:
    """
    Exponent bookkeeping for G_{p,q}: alpha = log2(2p/q) and the Dehn exponent 2 alpha.

    Slope samples s_k = (log N_{k+1} - log N_k) / (log len_{k+1} - log len_k)
    come from the witness family w_k = a^((2p)^k); ``fitted_slope`` is the
    least-squares slope of log N against log len over levels 1..levels.
    """
    check_pq(p, q)
    ratio = Fraction(2 * p, q)
    alpha = math.log2(ratio.numerator) - math.log2(ratio.denominator)
    rows = witness_profile(p, q, levels)
    samples = tuple(
        (math.log(n1) - math.log(n0)) / (math.log(l1) - math.log(l0))
        for (_, n0, l0), (_, n1, l1) in zip(rows, rows[1:])
    )
    log_len = [math.log(length) for _, _, length in rows[1:]]
    log_n = [math.log(n) for _, n, _ in rows[1:]]
    fitted = stats.linregress(log_len, log_n).slope if len(rows) > 2 else float("nan")
    return ExponentReport(
        p,
        q,
        ratio,
        alpha,
        2 * alpha,
        samples,
        float(fitted),
        math.log(2 * p) / math.log(2 * q),
    )


def exponent_for(p: int, q: int) -> float:
    return 2 * math.log2(2 * p / q)


def find_pq_for_exponent(rho: float, eps: float, q_max: int = 1000) -> Tuple[int, int]:
    """
    Smallest q <= q_max with some p >= q and |2 log2(2p/q) - rho| < eps.

    For each q the only p tried is the nearest integer to q * 2^(rho/2 - 1).

    Raises:
        NotFoundError: no pair within q_max; ``best`` holds the closest pair
    """
    if rho < 2:
        raise ParameterError(f"exponent must be at least 2, got {rho}")
    if eps <= 0:
        raise ParameterError(f"tolerance must be positive, got {eps}")
    if q_max < 1:
        raise ParameterError(f"q_max must be at least 1, got {q_max}")
    scale = 2 ** (rho / 2 - 1)
    best: Optional[Tuple[int, int]] = None
    best_error = math.inf
    for q in range(1, q_max + 1):
        p = max(q, round(q * scale))
        error = abs(exponent_for(p, q) - rho)
        if error < eps:
            logger.info(f"find_pq_for_exponent: rho={rho} -> (p={p}, q={q}), error {error:.6f}")
            return p, q
        if error < best_error:
            best, best_error = (p, q), error
    raise NotFoundError(
        f"no (p, q) with q <= {q_max} within {eps} of {rho}; best {best} off by {best_error:.6f}",
        best=best,
    )
