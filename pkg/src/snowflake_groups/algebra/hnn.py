"""
Word problem for multiple HNN extensions of Z^2 or the Klein bottle group
with cyclic associated subgroups, decided by Britton's lemma.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from itertools import groupby
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from ..exceptions import ParameterError
from .presentations import (
    KLEIN_ALPHABET,
    SNOWFLAKE_ALPHABET,
    check_pq,
    klein_rewrite_map,
)
from .words import Alphabet, Word, substitute

logger = logging.getLogger(__name__)


class BaseKind(str, Enum):
    Z2 = "Z2"
    KLEIN = "Klein"


class HnnFamily(str, Enum):
    R_KLEIN = "R_klein"
    G_SNOWFLAKE = "G_snowflake"


class Strategy(str, Enum):
    STACK = "stack"
    RANDOM = "random"


@dataclass(frozen=True)
class BaseElement:
    """
    Element a^i b^j of the base group in normal form.

    Z2 multiplies coordinatewise; the Klein bottle group <a, b | a^-1 b a b>
    uses (i, j)(k, l) = (i + k, (-1)^k j + l).
    """

    kind: BaseKind
    i: int
    j: int

    @classmethod
    def identity(cls, kind: BaseKind) -> "BaseElement":
        return cls(kind, 0, 0)

    @property
    def is_identity(self) -> bool:
        return self.i == 0 and self.j == 0

    def __mul__(self, other: "BaseElement") -> "BaseElement":
        if self.kind is not other.kind:
            raise ParameterError("cannot multiply elements of different base groups")
        if self.kind is BaseKind.KLEIN and other.i % 2:
            return BaseElement(self.kind, self.i + other.i, other.j - self.j)
        return BaseElement(self.kind, self.i + other.i, self.j + other.j)

    def inverse(self) -> "BaseElement":
        if self.kind is BaseKind.KLEIN and self.i % 2:
            return BaseElement(self.kind, -self.i, self.j)
        return BaseElement(self.kind, -self.i, -self.j)

    def power(self, m: int) -> "BaseElement":
        if self.kind is BaseKind.KLEIN and self.i % 2:
            # odd a-exponent: squares land in <a^2>
            return BaseElement(self.kind, m * self.i, self.j if m % 2 else 0)
        return BaseElement(self.kind, m * self.i, m * self.j)

    def as_tuple(self) -> Tuple[int, int]:
        return (self.i, self.j)


@dataclass(frozen=True)
class EdgeDatum:
    """Stable letter t with t^-1 domain^m t = codomain^m."""

    stable: int
    domain: BaseElement
    codomain: BaseElement

    def __post_init__(self) -> None:
        if self.domain.is_identity or self.codomain.is_identity:
            raise ParameterError("edge generators must have infinite order")


@dataclass(frozen=True)
class HnnGroup:
    kind: BaseKind
    alphabet: Alphabet
    base_letters: Dict[int, BaseElement]
    edges: Dict[int, EdgeDatum]

    def __post_init__(self) -> None:
        if set(self.base_letters) & set(self.edges):
            raise ParameterError("stable letters must be distinct from base generators")
        if set(self.base_letters) | set(self.edges) != {g.id for g in self.alphabet}:
            raise ParameterError("every generator must be a base generator or a stable letter")

    def __hash__(self) -> int:
        return hash((self.kind, self.alphabet))


@dataclass(frozen=True)
class BrittonForm:
    """Alternating g0 t1^e1 g1 ... tn^en gn; pinch-free when produced by britton_reduce."""

    bases: Tuple[BaseElement, ...]
    stables: Tuple[Tuple[int, int], ...]

    @property
    def syllable_count(self) -> int:
        return len(self.stables)

    @property
    def is_identity(self) -> bool:
        return not self.stables and self.bases[0].is_identity


@dataclass(frozen=True)
class SnowflakeWitness:
    k: int
    word: Word
    N: int
    length: int


def make_hnn(family: HnnFamily, p: int, q: int) -> HnnGroup:
    """
    HNN datum of R_{p,q} (over the Klein bottle) or G_{p,q} (over Z^2).

    Args:
        family: which group to build
        p: first family parameter, at least 1
        q: second family parameter, at least 1

    Returns:
        HnnGroup over the same alphabet as the matching presentation
    """
    check_pq(p, q)
    family = HnnFamily(family)
    if family is HnnFamily.R_KLEIN:
        kind = BaseKind.KLEIN
        base = {0: BaseElement(kind, 1, 0), 1: BaseElement(kind, 0, 1)}
        edges = {2: EdgeDatum(2, BaseElement(kind, 2 * q, 0), BaseElement(kind, 2 * p, 1))}
        return HnnGroup(kind, KLEIN_ALPHABET, base, edges)
    kind = BaseKind.Z2
    base = {0: BaseElement(kind, 1, 0), 1: BaseElement(kind, 0, 1)}
    edges = {
        2: EdgeDatum(2, BaseElement(kind, q, 0), BaseElement(kind, p, 1)),
        3: EdgeDatum(3, BaseElement(kind, q, 0), BaseElement(kind, p, -1)),
    }
    return HnnGroup(kind, SNOWFLAKE_ALPHABET, base, edges)


def make_free_abelian() -> HnnGroup:
    """Z^2 = <a, b | [a, b]> as an HNN datum without stable letters."""
    kind = BaseKind.Z2
    return HnnGroup(
        kind,
        Alphabet.from_names("a b"),
        {0: BaseElement(kind, 1, 0), 1: BaseElement(kind, 0, 1)},
        {},
    )


def cyclic_membership(g: BaseElement, c: BaseElement) -> Optional[int]:
    """Return m with g = c^m, or None when g is not in <c>."""
    if c.is_identity:
        raise ParameterError("cyclic_membership needs a generator of infinite order")
    if g.is_identity:
        return 0
    if c.i == 0:
        if g.i != 0 or g.j % c.j:
            return None
        return g.j // c.j
    if g.i % c.i:
        return None
    m = g.i // c.i
    return m if c.power(m) == g else None


def _syllabify(H: HnnGroup, w: Word) -> Iterator[Tuple[bool, int, int]]:
    """Yield (is_stable, generator id, exponent) runs; stable runs are split into letters."""
    for gid, run in groupby(w.letters, key=lambda letter: letter[0]):
        signs = [sign for _, sign in run]
        if gid in H.edges:
            for sign in signs:
                yield True, gid, sign
        else:
            if gid not in H.base_letters:
                raise ParameterError(f"generator id {gid} is not in the HNN alphabet")
            exponent = sum(signs)
            if exponent:
                yield False, gid, exponent


def _pinch(H: HnnGroup, left: Tuple[int, int], middle: BaseElement, right: Tuple[int, int]) -> Optional[BaseElement]:
    """Replacement base element for left * middle * right, or None if it is no pinch."""
    if left[0] != right[0] or left[1] != -right[1]:
        return None
    edge = H.edges[left[0]]
    if left[1] < 0:
        m = cyclic_membership(middle, edge.domain)
        return None if m is None else edge.codomain.power(m)
    m = cyclic_membership(middle, edge.codomain)
    return None if m is None else edge.domain.power(m)


def _reduce_stack(H: HnnGroup, w: Word) -> BrittonForm:
    bases: List[BaseElement] = [BaseElement.identity(H.kind)]
    stables: List[Tuple[int, int]] = []
    for is_stable, gid, exponent in _syllabify(H, w):
        if not is_stable:
            bases[-1] = bases[-1] * H.base_letters[gid].power(exponent)
            continue
        letter = (gid, exponent)
        if stables:
            replacement = _pinch(H, stables[-1], bases[-1], letter)
            if replacement is not None:
                stables.pop()
                bases.pop()
                bases[-1] = bases[-1] * replacement
                continue
        stables.append(letter)
        bases.append(BaseElement.identity(H.kind))
    return BrittonForm(tuple(bases), tuple(stables))


def _reduce_random(H: HnnGroup, w: Word, rng: np.random.Generator) -> BrittonForm:
    bases: List[BaseElement] = [BaseElement.identity(H.kind)]
    stables: List[Tuple[int, int]] = []
    for is_stable, gid, exponent in _syllabify(H, w):
        if is_stable:
            stables.append((gid, exponent))
            bases.append(BaseElement.identity(H.kind))
        else:
            bases[-1] = bases[-1] * H.base_letters[gid].power(exponent)

    while True:
        pinches = []
        for k in range(len(stables) - 1):
            replacement = _pinch(H, stables[k], bases[k + 1], stables[k + 1])
            if replacement is not None:
                pinches.append((k, replacement))
        if not pinches:
            break
        k, replacement = pinches[int(rng.integers(len(pinches)))]
        merged = bases[k] * replacement * bases[k + 2]
        bases[k : k + 3] = [merged]
        del stables[k : k + 2]
    return BrittonForm(tuple(bases), tuple(stables))


def britton_reduce(
    H: HnnGroup,
    w: Word,
    strategy: Strategy = Strategy.STACK,
    rng: Optional[np.random.Generator] = None,
) -> BrittonForm:
    """
    Reduce ``w`` to a pinch-free Britton form.

    The stack strategy removes pinches innermost-first, left to right, in a
    single pass over the syllables. The random strategy builds the unreduced
    form and removes a uniformly chosen pinch until none remain.
    """
    if Strategy(strategy) is Strategy.STACK:
        return _reduce_stack(H, w)
    return _reduce_random(H, w, rng if rng is not None else np.random.default_rng(0))


def is_trivial(H: HnnGroup, w: Word) -> bool:
    return britton_reduce(H, w).is_identity


def to_klein_word(w: Word) -> Word:
    """Push a word over {x, y, t} through x -> a, y -> ab, t -> t."""
    return substitute(w, klein_rewrite_map())


def is_trivial_in_R(p: int, q: int, w: Word) -> bool:
    """Word problem of R_{p,q} for words over {x, y, t}, solved in the Klein form."""
    return is_trivial(make_hnn(HnnFamily.R_KLEIN, p, q), to_klein_word(w))


def snowflake_witness(p: int, q: int, k: int) -> SnowflakeWitness:
    """
    Witness word w_k with w_k = a^((2p)^k) in G_{p,q}.

    w_0 = a and w_{k+1} = s^-1 w_k^q s t^-1 w_k^q t.
    """
    check_pq(p, q)
    if k < 0:
        raise ParameterError(f"witness level must be non-negative, got {k}")
    a, s, t = (SNOWFLAKE_ALPHABET.letter(name) for name in ("a", "s", "t"))
    word = a
    for _ in range(k):
        half = word ** q
        word = s.inverse() * half * s * t.inverse() * half * t
    return SnowflakeWitness(k, word, (2 * p) ** k, len(word))


def witness_profile(p: int, q: int, levels: int) -> List[Tuple[int, int, int]]:
    """(k, N_k, len_k) for k = 0..levels by recurrence, without building words."""
    check_pq(p, q)
    rows = []
    length = 1
    for k in range(levels + 1):
        rows.append((k, (2 * p) ** k, length))
        length = 2 * q * length + 4
    return rows


def random_word(
    alphabet: Alphabet, length: int, rng: np.random.Generator, reduced: bool = True
) -> Word:
    """Uniform random word of the given length, freely reduced by construction if requested."""
    letters = []
    n = len(alphabet)
    while len(letters) < length:
        letter = (int(rng.integers(n)), 1 if rng.integers(2) else -1)
        if reduced and letters and letters[-1] == (letter[0], -letter[1]):
            continue
        letters.append(letter)
    return Word(tuple(letters))


def random_consequence(
    relators: Tuple[Word, ...],
    alphabet: Alphabet,
    rng: np.random.Generator,
    count: int = 5,
    conjugator_length: int = 5,
) -> Word:
    """Product of ``count`` conjugates u r^{+-1} u^-1 with random u of length at most ``conjugator_length``."""
    word = Word()
    for _ in range(count):
        relator = relators[int(rng.integers(len(relators)))]
        if rng.integers(2):
            relator = relator.inverse()
        u = random_word(alphabet, int(rng.integers(conjugator_length + 1)), rng)
        word = word * u * relator * u.inverse()
    return word
