"""
Todd-Coxeter coset enumeration (HLT strategy) and Reidemeister-Schreier
rewriting.

Table columns are ``2 * g`` for generator ``g`` and ``2 * g + 1`` for its
inverse, so ``column ^ 1`` is the inverse column.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from ..exceptions import CosetLimitError, ParameterError
from .presentations import (
    CharacterMap,
    Presentation,
    character_check,
    character_is_surjective,
)
from .words import Alphabet, Word, free_reduce

logger = logging.getLogger(__name__)


def _column(letter: Tuple[int, int]) -> int:
    gid, sign = letter
    return 2 * gid + (0 if sign > 0 else 1)


def _letter(column: int) -> Tuple[int, int]:
    return (column >> 1, -1 if column & 1 else 1)


@dataclass(frozen=True)
class SubgroupDatum:
    generators: Tuple[Word, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "generators", tuple(free_reduce(w) for w in self.generators))


@dataclass(frozen=True)
class CosetTable:
    """Complete coset table; coset 0 is the subgroup and ``transversal[c]`` maps 0 to c."""

    alphabet: Alphabet
    action: Tuple[Tuple[int, ...], ...]
    transversal: Tuple[Word, ...]

    @property
    def index(self) -> int:
        return len(self.action)

    def act(self, coset: int, gen_id: int, sign: int = 1) -> int:
        return self.action[coset][_column((gen_id, sign))]

    def trace(self, coset: int, w: Word) -> int:
        for letter in w:
            coset = self.action[coset][_column(letter)]
        return coset

    def rows(self) -> List[Dict[str, int]]:
        """One mapping per coset from signed generator name to image coset."""
        out = []
        for coset, row in enumerate(self.action):
            entry = {"coset": coset}
            for g in self.alphabet:
                entry[g.name] = row[2 * g.id]
                entry[f"{g.name}^-1"] = row[2 * g.id + 1]
            out.append(entry)
        return out


class _Enumerator:
    """Mutable working table with union-find coincidence processing."""

    def __init__(self, ncols: int, limit: int):
        self.ncols = ncols
        self.limit = limit
        self.table: List[List[Optional[int]]] = [[None] * ncols]
        self.parent: List[int] = [0]

    def find(self, c: int) -> int:
        root = c
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[c] != root:
            self.parent[c], c = root, self.parent[c]
        return root

    def is_live(self, c: int) -> bool:
        return self.parent[c] == c

    def define(self, c: int, x: int) -> None:
        if len(self.table) >= self.limit:
            raise CosetLimitError(self.limit, len(self.table) + 1)
        d = len(self.table)
        self.table.append([None] * self.ncols)
        self.parent.append(d)
        self.table[c][x] = d
        self.table[d][x ^ 1] = c

    def _merge(self, k: int, l: int, queue: List[int]) -> None:
        k, l = self.find(k), self.find(l)
        if k == l:
            return
        k, l = min(k, l), max(k, l)
        self.parent[l] = k
        queue.append(l)

    def coincidence(self, a: int, b: int) -> None:
        queue: List[int] = []
        self._merge(a, b, queue)
        position = 0
        while position < len(queue):
            e = queue[position]
            position += 1
            for x in range(self.ncols):
                f = self.table[e][x]
                if f is None:
                    continue
                self.table[f][x ^ 1] = None
                e1, f1 = self.find(e), self.find(f)
                if self.table[e1][x] is not None:
                    self._merge(f1, self.table[e1][x], queue)
                elif self.table[f1][x ^ 1] is not None:
                    self._merge(e1, self.table[f1][x ^ 1], queue)
                else:
                    self.table[e1][x] = f1
                    self.table[f1][x ^ 1] = e1

    def scan_and_fill(self, c: int, word: Sequence[int]) -> None:
        table = self.table
        f, b = c, c
        i, j = 0, len(word) - 1
        while True:
            while i <= j and table[f][word[i]] is not None:
                f = table[f][word[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and table[b][word[j] ^ 1] is not None:
                b = table[b][word[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                table[f][word[i]] = b
                table[b][word[i] ^ 1] = f
                return
            self.define(f, word[i])

    def compact(self, alphabet: Alphabet) -> CosetTable:
        """Renumber live cosets in breadth-first discovery order and build the transversal."""
        ncols = self.ncols
        order = [0]
        number = {0: 0}
        reps = [Word()]
        position = 0
        while position < len(order):
            c = order[position]
            position += 1
            for x in range(ncols):
                d = self.find(self.table[c][x])
                if d not in number:
                    number[d] = len(order)
                    order.append(d)
                    reps.append(Word(reps[number[c]].letters + (_letter(x),)))
        action = tuple(
            tuple(number[self.find(self.table[c][x])] for x in range(ncols)) for c in order
        )
        return CosetTable(alphabet, action, tuple(reps))


def todd_coxeter(P: Presentation, H: SubgroupDatum, limit: int = 10**6) -> CosetTable:
    """
    Enumerate the cosets of ``H`` in the group presented by ``P``.

    Subgroup generators are scanned at coset 0 first; then relators are
    scanned at every live coset in creation order, and any remaining hole in
    the row is filled by a new definition.

    Args:
        P: group presentation
        H: subgroup generators as words over P's alphabet
        limit: maximum number of cosets ever defined

    Returns:
        Complete CosetTable with one row per coset

    Raises:
        CosetLimitError: when more than ``limit`` cosets are needed
    """
    if limit < 1:
        raise ParameterError("coset limit must be at least 1")
    ncols = 2 * len(P.alphabet)
    enum = _Enumerator(ncols, limit)
    relators = [[_column(letter) for letter in r] for r in P.relators]

    for h in H.generators:
        if h:
            enum.scan_and_fill(0, [_column(letter) for letter in h])

    c = 0
    while c < len(enum.table):
        if enum.is_live(c):
            for relator in relators:
                enum.scan_and_fill(c, relator)
                if not enum.is_live(c):
                    break
            if enum.is_live(c):
                for x in range(ncols):
                    if enum.table[c][x] is None:
                        enum.define(c, x)
        c += 1

    table = enum.compact(P.alphabet)
    logger.debug(f"Coset enumeration closed at index {table.index} after {len(enum.table)} definitions")
    return table


def relators_close(T: CosetTable, P: Presentation) -> bool:
    """True iff every relator traces a closed loop at every coset."""
    return all(T.trace(c, r) == c for c in range(T.index) for r in P.relators)


def kernel_subgroup(P: Presentation, c: CharacterMap) -> SubgroupDatum:
    """
    Schreier generators of the kernel of a surjective character.

    Residue representatives come from a breadth-first search over residues
    (generators in alphabet order, positive letter before inverse), giving a
    prefix-closed transversal.
    """
    if not character_check(P, c):
        raise ParameterError("character does not kill every relator")
    if not character_is_surjective(c):
        raise ParameterError(f"character is not surjective onto Z/{c.modulus}")
    n = c.modulus
    reps: Dict[int, Word] = {0: Word()}
    order = [0]
    position = 0
    while position < len(order):
        rho = order[position]
        position += 1
        for g in P.alphabet:
            for sign in (1, -1):
                target = (rho + sign * c.residues[g.id]) % n
                if target not in reps:
                    reps[target] = Word(reps[rho].letters + ((g.id, sign),))
                    order.append(target)

    generators: List[Word] = []
    seen = set()
    for rho in order:
        for g in P.alphabet:
            target = (rho + c.residues[g.id]) % n
            w = free_reduce(reps[rho] * Word.letter(g.id) * reps[target].inverse())
            if w and w.letters not in seen:
                seen.add(w.letters)
                generators.append(w)
    return SubgroupDatum(tuple(generators))


def _schreier_table(T: CosetTable) -> List[Tuple[int, int, Word]]:
    """Nontrivial Schreier generators as (coset, generator id, ambient word), coset-major."""
    out = []
    for coset in range(T.index):
        for g in T.alphabet:
            target = T.act(coset, g.id)
            w = free_reduce(T.transversal[coset] * Word.letter(g.id) * T.transversal[target].inverse())
            if w:
                out.append((coset, g.id, w))
    return out


def schreier_generators(P: Presentation, T: CosetTable) -> Dict[str, Word]:
    """Map Schreier generator name ``<generator>_<coset>`` to its ambient word."""
    return {
        f"{P.alphabet.name_of(gid)}_{coset}": w for coset, gid, w in _schreier_table(T)
    }


def reidemeister_schreier(P: Presentation, T: CosetTable) -> Presentation:
    """
    Presentation of the subgroup of ``T`` on its nontrivial Schreier generators.

    Every relator is traced from every coset; each letter contributes its
    Schreier generator (tree edges contribute nothing).
    """
    entries = _schreier_table(T)
    alphabet = Alphabet.from_names(f"{P.alphabet.name_of(gid)}_{coset}" for coset, gid, _ in entries)
    symbol = {(coset, gid): index for index, (coset, gid, _) in enumerate(entries)}

    relators = []
    for coset in range(T.index):
        for relator in P.relators:
            letters = []
            current = coset
            for gid, sign in relator:
                if sign > 0:
                    key = (current, gid)
                    current = T.act(current, gid)
                else:
                    current = T.act(current, gid, -1)
                    key = (current, gid)
                if key in symbol:
                    letters.append((symbol[key], sign))
            relators.append(free_reduce(Word(tuple(letters))))
    logger.debug(f"Reidemeister-Schreier: {len(alphabet)} generators, {len(relators)} relators")
    return Presentation(alphabet, tuple(relators))
