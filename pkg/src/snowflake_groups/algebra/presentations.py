"""
Finite presentations, the group-family constructors, Tietze simplification
and finite cyclic character checks.
"""

import logging
from dataclasses import dataclass, field
from math import gcd
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors

from ..exceptions import ParameterError, WordParseError
from .words import (
    Alphabet,
    GeneratorMap,
    Word,
    commutator,
    cyclic_key,
    cyclic_reduce,
    exponent_sum,
    format_word,
    parse_word,
    rotations,
    substitute,
)

logger = logging.getLogger(__name__)

R_ALPHABET = Alphabet.from_names("x y t")
KLEIN_ALPHABET = Alphabet.from_names("a b t")
SNOWFLAKE_ALPHABET = Alphabet.from_names("a b s t")


@dataclass(frozen=True)
class Presentation:
    """Generators plus relators; relators are stored cyclically reduced and nonempty."""

    alphabet: Alphabet
    relators: Tuple[Word, ...] = ()

    def __post_init__(self) -> None:
        size = len(self.alphabet)
        normalized = []
        for relator in self.relators:
            if any(gid < 0 or gid >= size for gid, _ in relator):
                raise ParameterError("relator uses a generator outside the alphabet")
            core, _ = cyclic_reduce(relator)
            if core:
                normalized.append(core)
        object.__setattr__(self, "relators", tuple(normalized))

    def format_relators(self) -> List[str]:
        return [format_word(r, self.alphabet) for r in self.relators]

    def to_dict(self) -> Dict[str, List[str]]:
        return {"generators": list(self.alphabet.names), "relators": self.format_relators()}

    def to_text(self) -> str:
        lines = ["gens: " + " ".join(self.alphabet.names)]
        lines.extend(self.format_relators())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Presentation":
        """Parse the ``gens:`` line plus one relator per line; ``#`` starts a comment."""
        lines = [line.split("#", 1)[0].strip() for line in text.splitlines()]
        lines = [line for line in lines if line]
        if not lines or not lines[0].startswith("gens:"):
            raise WordParseError("presentation text must start with a 'gens:' line")
        alphabet = Alphabet.from_names(lines[0][len("gens:"):].split())
        return cls(alphabet, tuple(parse_word(line, alphabet) for line in lines[1:]))


@dataclass(frozen=True)
class FamilyParams:
    """Parameters of R(m, n, k, l) = <x, y, t | x^m = y^n, t^-1 x^k t = x^l y>."""

    m: int
    n: int
    k: int
    l: int

    def __post_init__(self) -> None:
        if abs(self.m) < 2 or abs(self.n) < 2:
            raise ParameterError(f"need |m|, |n| >= 2, got m={self.m}, n={self.n}")
        if self.k == 0:
            raise ParameterError("need k != 0")
        if self.l % self.m == 0:
            raise ParameterError(f"need l not divisible by m, got l={self.l}, m={self.m}")

    @classmethod
    def from_pq(cls, p: int, q: int) -> "FamilyParams":
        check_pq(p, q)
        return cls(2, 2, 2 * q, 2 * p - 1)


@dataclass(frozen=True)
class CharacterMap:
    """Homomorphism candidate to Z/modulus given by per-generator residues."""

    modulus: int
    residues: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise ParameterError(f"modulus must be positive, got {self.modulus}")
        object.__setattr__(
            self, "residues", {gid: r % self.modulus for gid, r in self.residues.items()}
        )

    @classmethod
    def from_values(cls, modulus: int, values: Sequence[int]) -> "CharacterMap":
        return cls(modulus, dict(enumerate(values)))

    def covers(self, alphabet: Alphabet) -> bool:
        return all(g.id in self.residues for g in alphabet)

    def evaluate(self, w: Word) -> int:
        return sum(self.residues[gid] * sign for gid, sign in w) % self.modulus


@dataclass(frozen=True)
class AbelianInvariants:
    free_rank: int
    torsion: Tuple[int, ...]


@dataclass(frozen=True)
class TietzeResult:
    presentation: Presentation
    exhausted: bool
    steps: int


def check_pq(p: int, q: int) -> None:
    if p < 1 or q < 1:
        raise ParameterError(f"need p, q >= 1, got p={p}, q={q}")


def make_one_relator_R(params: FamilyParams) -> Presentation:
    """<x, y, t | x^m y^-n, t^-1 x^k t (x^l y)^-1>."""
    x, y, t = (R_ALPHABET.letter(name) for name in ("x", "y", "t"))
    return Presentation(
        R_ALPHABET,
        (
            x ** params.m * y ** (-params.n),
            t.inverse() * x ** params.k * t * (x ** params.l * y).inverse(),
        ),
    )


def r_pq(p: int, q: int) -> Presentation:
    return make_one_relator_R(FamilyParams.from_pq(p, q))


def make_klein_form(p: int, q: int) -> Presentation:
    """R_{p,q} rewritten over the Klein bottle group: <a, b, t | a^-1 b a b, t^-1 a^2q t (a^2p b)^-1>."""
    check_pq(p, q)
    a, b, t = (KLEIN_ALPHABET.letter(name) for name in ("a", "b", "t"))
    return Presentation(
        KLEIN_ALPHABET,
        (
            a.inverse() * b * a * b,
            t.inverse() * a ** (2 * q) * t * (a ** (2 * p) * b).inverse(),
        ),
    )


def make_snowflake_G(p: int, q: int) -> Presentation:
    """<a, b, s, t | [a, b], s^-1 a^q s = a^p b, t^-1 a^q t = a^p b^-1>."""
    check_pq(p, q)
    a, b, s, t = (SNOWFLAKE_ALPHABET.letter(name) for name in ("a", "b", "s", "t"))
    return Presentation(
        SNOWFLAKE_ALPHABET,
        (
            commutator(a, b),
            s.inverse() * a ** q * s * (a ** p * b).inverse(),
            t.inverse() * a ** q * t * (a ** p * b.inverse()).inverse(),
        ),
    )


def klein_rewrite_map() -> GeneratorMap:
    """x -> a, y -> ab, t -> t."""
    return GeneratorMap.from_text(R_ALPHABET, KLEIN_ALPHABET, {"x": "a", "y": "a b", "t": "t"})


def klein_inverse_map() -> GeneratorMap:
    """a -> x, b -> x^-1 y, t -> t."""
    return GeneratorMap.from_text(KLEIN_ALPHABET, R_ALPHABET, {"a": "x", "b": "x^-1 y", "t": "t"})


def character_check(P: Presentation, c: CharacterMap) -> bool:
    """True iff every relator has residue-weighted exponent sum 0 mod the modulus."""
    if not c.covers(P.alphabet):
        raise ParameterError("character map does not cover the presentation's generators")
    return all(c.evaluate(r) == 0 for r in P.relators)


def character_is_surjective(c: CharacterMap) -> bool:
    g = c.modulus
    for residue in c.residues.values():
        g = gcd(g, residue)
    return g == 1


def abelian_invariants(P: Presentation) -> AbelianInvariants:
    """Free rank and torsion coefficients of the abelianization, via Smith normal form."""
    ngens = len(P.alphabet)
    if not P.relators or ngens == 0:
        return AbelianInvariants(ngens, ())
    rows = [[ZZ(exponent_sum(r, g.id)) for g in P.alphabet] for r in P.relators]
    matrix = DomainMatrix(rows, (len(rows), ngens), ZZ)
    factors = [abs(int(f)) for f in invariant_factors(matrix)]
    nonzero = [f for f in factors if f != 0]
    return AbelianInvariants(ngens - len(nonzero), tuple(f for f in nonzero if f > 1))


def _cheap_pass(relators: Iterable[Word]) -> List[Word]:
    """Cyclically reduce, drop trivial relators, dedupe up to rotation and inversion."""
    seen = set()
    kept = []
    for relator in relators:
        core, _ = cyclic_reduce(relator)
        if not core:
            continue
        key = cyclic_key(core)
        if key in seen:
            continue
        seen.add(key)
        kept.append(core)
    return kept


def _solve_for(relator: Word, gen_id: int) -> Word:
    """Expression for ``gen_id`` from a relator in which it occurs exactly once."""
    for rotated in rotations(relator):
        last_gen, last_sign = rotated[-1]
        if last_gen == gen_id:
            rest = rotated[:-1]
            return rest.inverse() if last_sign > 0 else rest
    raise ParameterError("generator does not occur in relator")


def _elimination_candidates(relators: List[Word]) -> List[Tuple[int, int, int]]:
    candidates = []
    for index, relator in enumerate(relators):
        counts: Dict[int, int] = {}
        for gid, _ in relator:
            counts[gid] = counts.get(gid, 0) + 1
        for gid, count in counts.items():
            if count == 1:
                candidates.append((len(relator), gid, index))
    candidates.sort()
    return candidates


def _try_eliminate(
    relators: List[Word], gen_id: int, index: int, ngens: int
) -> Optional[List[Word]]:
    expression = _solve_for(relators[index], gen_id)
    images = {gid: Word.letter(gid) for gid in range(ngens)}
    images[gen_id] = expression
    mapping = GeneratorMap(images)
    rewritten = [
        cyclic_reduce(substitute(r, mapping))[0]
        for i, r in enumerate(relators)
        if i != index
    ]
    if sum(len(r) for r in rewritten) > sum(len(r) for r in relators):
        return None
    return rewritten


def tietze_simplify(P: Presentation, budget: int = 1000) -> TietzeResult:
    """
    Simplify a presentation by Tietze moves.

    Cheap moves (reduction, trivial-relator deletion, deduplication) run to a
    fixpoint before each elimination. A generator occurring exactly once in a
    relator is eliminated when doing so does not lengthen the presentation;
    candidates are tried shortest relator first, then lowest generator id.

    Args:
        P: presentation to simplify
        budget: maximum number of generator eliminations

    Returns:
        TietzeResult with the simplified presentation and an ``exhausted``
        flag set when the budget ran out before a fixpoint
    """
    ngens = len(P.alphabet)
    alive = [True] * ngens
    relators = _cheap_pass(P.relators)
    steps = 0
    exhausted = False

    while True:
        chosen = None
        for _, gen_id, index in _elimination_candidates(relators):
            rewritten = _try_eliminate(relators, gen_id, index, ngens)
            if rewritten is not None:
                chosen = (gen_id, rewritten)
                break
        if chosen is None:
            break
        if steps >= budget:
            exhausted = True
            logger.warning(f"Tietze budget of {budget} eliminations exhausted")
            break
        gen_id, rewritten = chosen
        logger.debug(f"Eliminating generator {P.alphabet.name_of(gen_id)}")
        alive[gen_id] = False
        relators = _cheap_pass(rewritten)
        steps += 1

    survivors = [g for g in P.alphabet if alive[g.id]]
    renumber = {g.id: Word.letter(new_id) for new_id, g in enumerate(survivors)}
    alphabet = Alphabet.from_names(g.name for g in survivors)
    mapping = GeneratorMap(renumber)
    simplified = Presentation(alphabet, tuple(substitute(r, mapping) for r in relators))
    return TietzeResult(simplified, exhausted, steps)
